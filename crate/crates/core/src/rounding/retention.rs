//! Monte Carlo estimation of sampling and retention frequencies.

use rayon::prelude::*;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{validate_scale, AlterationRule, PreparedAlteration};
use crate::error::{invalid, Result};
use crate::instance::{FractionalSolution, PipInstance, FEASIBILITY_TOL};
use crate::rng::trial_rng;

/// Trials per work unit. Fixed so that floating-point sums do not depend on
/// thread scheduling.
const CHUNK: u64 = 2048;

/// z-score used for the reported Wilson interval.
const WILSON_Z: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemRetention {
    /// Trials with `i ∈ S`.
    pub sampled: u64,
    /// Trials with `i ∈ S′`.
    pub retained: u64,
    pub p_sampled: f64,
    pub p_sampled_se: f64,
    /// `Pr[i ∈ S′ | i ∈ S]`, undefined when `i` was never sampled.
    pub retention: Option<f64>,
    pub retention_se: Option<f64>,
    pub retention_wilson: Option<(f64, f64)>,
}

impl ItemRetention {
    /// True when the estimate is consistent with `retention ≥ bound` at
    /// `sigmas` standard errors. Undefined estimates pass vacuously.
    pub fn consistent_with_lower_bound(&self, bound: f64, sigmas: f64) -> bool {
        match (self.retention, self.retention_se) {
            (Some(r), Some(se)) => r >= bound - sigmas * se,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetentionEstimate {
    pub rule: AlterationRule,
    pub scale: f64,
    pub trials: u64,
    pub seed: u64,
    pub items: Vec<ItemRetention>,
    /// Trials whose altered set violated some constraint.
    pub feasibility_violations: u64,
    /// Mean additive value of `S′`.
    pub mean_value: f64,
    pub value_se: f64,
    /// Mean additive value of `S`.
    pub mean_sampled_value: f64,
}

#[derive(Default)]
struct Tally {
    sampled: Vec<u64>,
    retained: Vec<u64>,
    violations: u64,
    value_sum: f64,
    value_sq: f64,
    sampled_value_sum: f64,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            sampled: vec![0; n],
            retained: vec![0; n],
            ..Tally::default()
        }
    }

    fn merge(&mut self, other: Tally) {
        for (a, b) in self.sampled.iter_mut().zip(other.sampled) {
            *a += b;
        }
        for (a, b) in self.retained.iter_mut().zip(other.retained) {
            *a += b;
        }
        self.violations += other.violations;
        self.value_sum += other.value_sum;
        self.value_sq += other.value_sq;
        self.sampled_value_sum += other.sampled_value_sum;
    }
}

/// Runs `trials` independent sample-and-alter trials (trial `t` uses stream
/// `t` of `seed`) and reports per-item frequencies with binomial standard
/// errors. Trials run in parallel; the result is independent of scheduling.
pub fn estimate_retention(
    inst: &PipInstance,
    x: &FractionalSolution,
    rule: AlterationRule,
    scale: f64,
    trials: u64,
    seed: u64,
) -> Result<RetentionEstimate> {
    if trials == 0 {
        return Err(invalid("trials must be at least one"));
    }
    if x.len() != inst.n() {
        return Err(invalid(format!("x has {} entries, instance has {} items", x.len(), inst.n())));
    }
    validate_scale(&x.x, scale)?;
    let prepared = PreparedAlteration::new(inst, rule)?;
    let n = inst.n();
    let probs: Vec<f64> = x.x.iter().map(|&v| scale * v).collect();
    let chunks = trials.div_ceil(CHUNK);

    let tallies: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut tally = Tally::new(n);
            let mut present = vec![false; n];
            let mut marked = vec![false; n];
            let mut loads = vec![0.0; inst.m()];
            for trial in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let mut rng = trial_rng(seed, trial);
                for (p, &q) in present.iter_mut().zip(&probs) {
                    *p = rng.gen::<f64>() < q;
                }
                marked.iter_mut().for_each(|m| *m = false);
                prepared.mark(&present, &mut marked, None);

                loads.iter_mut().for_each(|l| *l = 0.0);
                let mut value = 0.0;
                let mut sampled_value = 0.0;
                for i in 0..n {
                    if !present[i] {
                        continue;
                    }
                    tally.sampled[i] += 1;
                    sampled_value += inst.weights()[i];
                    if !marked[i] {
                        tally.retained[i] += 1;
                        value += inst.weights()[i];
                        for &(j, s) in inst.column(i) {
                            loads[j] += s;
                        }
                    }
                }
                let feasible = loads
                    .iter()
                    .zip(inst.capacities())
                    .all(|(&l, &cap)| l <= cap + FEASIBILITY_TOL * cap.max(1.0));
                if !feasible {
                    tally.violations += 1;
                }
                tally.value_sum += value;
                tally.value_sq += value * value;
                tally.sampled_value_sum += sampled_value;
            }
            tally
        })
        .collect();

    let mut total = Tally::new(n);
    for t in tallies {
        total.merge(t);
    }

    let tf = trials as f64;
    let items = (0..n)
        .map(|i| {
            let sampled = total.sampled[i];
            let retained = total.retained[i];
            let p = sampled as f64 / tf;
            let (retention, retention_se, retention_wilson) = if sampled > 0 {
                let ns = sampled as f64;
                let r = retained as f64 / ns;
                (Some(r), Some((r * (1.0 - r) / ns).sqrt()), Some(wilson(r, ns, WILSON_Z)))
            } else {
                (None, None, None)
            };
            ItemRetention {
                sampled,
                retained,
                p_sampled: p,
                p_sampled_se: (p * (1.0 - p) / tf).sqrt(),
                retention,
                retention_se,
                retention_wilson,
            }
        })
        .collect();
    let mean_value = total.value_sum / tf;
    let variance = (total.value_sq / tf - mean_value * mean_value).max(0.0);
    Ok(RetentionEstimate {
        rule,
        scale,
        trials,
        seed,
        items,
        feasibility_violations: total.violations,
        mean_value,
        value_se: (variance / tf).sqrt(),
        mean_sampled_value: total.sampled_value_sum / tf,
    })
}

/// Wilson score interval for a binomial proportion.
fn wilson(p: f64, n: f64, z: f64) -> (f64, f64) {
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}
