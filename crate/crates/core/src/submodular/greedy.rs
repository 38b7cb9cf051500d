use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::multilinear::{multilinear_exact, parallel_moments, sample_members, validate_point, ValueTable, TABLE_MAX_N};
use super::{MeanEstimate, ValueOracle};
use crate::error::{invalid, precondition, Result};
use crate::instance::{FractionalSolution, ItemSet, PipInstance};
use crate::lp::{LpModel, LpSolver, Relaxation, Simplex};
use crate::rng::{trial_rng, TrialSeed};
use crate::rounding::{k_of, sample_with_rng, AlterationRule, PreparedAlteration, RoundingReport};

/// How continuous greedy obtains the gradient
/// `∂F/∂x_i = E[f(S ∪ {i}) − f(S ∖ {i})]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GradientMode {
    /// Exact expectation from a full value table (`n ≤ 20`).
    Exact,
    /// Mean over `samples` draws of `S` per step.
    Sampled { samples: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyOptions {
    pub steps: usize,
    pub gradient: GradientMode,
    pub seed: u64,
}

impl GreedyOptions {
    pub const DEFAULT_SAMPLES: u64 = 200;

    /// `max(100, 10n)` steps; exact gradient when `n ≤ 20`, otherwise 200
    /// samples per step.
    pub fn for_size(n: usize, seed: u64) -> Self {
        GreedyOptions {
            steps: 100.max(10 * n),
            gradient: if n <= TABLE_MAX_N {
                GradientMode::Exact
            } else {
                GradientMode::Sampled {
                    samples: Self::DEFAULT_SAMPLES,
                }
            },
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyResult {
    /// Final point; `objective` holds `F(x)` (exact when `n ≤ 25`, else a
    /// 10⁴-sample estimate).
    pub x: FractionalSolution,
    /// `F` after each step; recorded in exact mode only.
    pub trajectory: Vec<f64>,
}

/// Continuous greedy over a down-closed polytope: starting from `x = 0`, each
/// of `T` steps moves `x` by `v/T` where `v` maximizes `∇F(x)` over the
/// polytope.
pub fn continuous_greedy(f: &impl ValueOracle, polytope: &LpModel, opts: &GreedyOptions) -> Result<GreedyResult> {
    continuous_greedy_with(&Simplex::default(), f, polytope, opts)
}

pub fn continuous_greedy_with(
    solver: &impl LpSolver,
    f: &impl ValueOracle,
    polytope: &LpModel,
    opts: &GreedyOptions,
) -> Result<GreedyResult> {
    let n = f.n();
    if polytope.num_vars() != n {
        return Err(invalid(format!(
            "polytope has {} variables, oracle has {n} items",
            polytope.num_vars()
        )));
    }
    if opts.steps == 0 {
        return Err(invalid("steps must be at least one"));
    }
    if polytope.bounds.iter().any(|&(lo, _)| lo != 0.0) || polytope.rows.iter().any(|r| r.rhs < 0.0) {
        return Err(precondition("continuous greedy needs a down-closed polytope"));
    }
    let table = match opts.gradient {
        GradientMode::Exact => Some(ValueTable::new(f)?),
        GradientMode::Sampled { samples: 0 } => return Err(invalid("samples must be at least one")),
        GradientMode::Sampled { .. } => None,
    };
    let step = 1.0 / opts.steps as f64;
    let mut x = vec![0.0; n];
    let mut trajectory = Vec::new();
    for t in 0..opts.steps {
        let gains = match (&table, opts.gradient) {
            (Some(table), _) => table.gradient(&x)?,
            (None, GradientMode::Sampled { samples }) => sampled_gradient(f, &x, samples, opts.seed, t as u64),
            (None, GradientMode::Exact) => unreachable!("exact mode always builds a table"),
        };
        let vertex = solver.solve(&polytope.with_objective(gains))?;
        for (xi, (vi, &(_, hi))) in x.iter_mut().zip(vertex.x.iter().zip(&polytope.bounds)) {
            *xi = (*xi + step * vi).clamp(0.0, hi.min(1.0));
        }
        if let Some(table) = &table {
            trajectory.push(table.multilinear(&x)?);
        }
    }
    let value = match &table {
        Some(table) => table.multilinear(&x)?,
        None => match multilinear_exact(f, &x) {
            Ok(v) => v,
            Err(_) => super::multilinear_estimate(f, &x, 10_000, opts.seed)?.mean,
        },
    };
    Ok(GreedyResult {
        x: FractionalSolution::new(x, value),
        trajectory,
    })
}

/// Sampled gradient for step `t`; sample `r` uses stream `t · samples + r`.
/// Per-sample vectors are summed in order.
fn sampled_gradient(f: &impl ValueOracle, x: &[f64], samples: u64, seed: u64, t: u64) -> Vec<f64> {
    let n = x.len();
    let per_sample: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(seed, t * samples + r);
            let mut members = vec![false; n];
            sample_members(x, &mut rng, &mut members);
            let base = f.value(&members);
            (0..n)
                .map(|i| {
                    members[i] = !members[i];
                    let flipped = f.value(&members);
                    members[i] = !members[i];
                    if members[i] {
                        base - flipped
                    } else {
                        flipped - base
                    }
                })
                .collect()
        })
        .collect();
    let mut gains = vec![0.0; n];
    for sample in per_sample {
        for (g, v) in gains.iter_mut().zip(sample) {
            *g += v;
        }
    }
    gains.iter_mut().for_each(|g| *g /= samples as f64);
    gains
}

/// Output of the submodular pipeline: the fractional point and one rounded
/// trial (`report.value` is `f(S′)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmodularRounding {
    pub greedy: GreedyResult,
    pub report: RoundingReport,
}

/// Continuous greedy over `relaxation`, then sampling at `x/(αk)` and the
/// sorted alteration.
pub fn maximize_submodular(
    f: &impl ValueOracle,
    inst: &PipInstance,
    alpha: f64,
    relaxation: Relaxation,
    opts: &GreedyOptions,
    seed: impl Into<TrialSeed>,
) -> Result<SubmodularRounding> {
    check_pipeline_input(f, inst)?;
    let polytope = relaxation.build(inst)?;
    let greedy = continuous_greedy(f, &polytope, opts)?;
    let scale = sorted_scale(inst, alpha)?;
    let seed = seed.into();
    let sampled = sample_with_rng(&greedy.x.x, scale, &mut seed.rng())?;
    let alteration = PreparedAlteration::new(inst, AlterationRule::Sorted)?.alter(&sampled);
    let value = f.value(&alteration.survivors.to_bools());
    Ok(SubmodularRounding {
        greedy,
        report: RoundingReport {
            seed: seed.seed,
            trial: seed.trial,
            rule: AlterationRule::Sorted,
            alpha,
            scale,
            sampled,
            causes: alteration.causes,
            survivors: alteration.survivors,
            value,
        },
    })
}

pub(crate) fn check_pipeline_input(f: &impl ValueOracle, inst: &PipInstance) -> Result<()> {
    if f.n() != inst.n() {
        return Err(invalid(format!("oracle has {} items, instance has {}", f.n(), inst.n())));
    }
    if !inst.is_unit_capacity() {
        return Err(precondition("instance must be normalized to unit capacities"));
    }
    if !inst.has_unit_bounds() {
        return Err(precondition("submodular rounding needs unit upper bounds"));
    }
    Ok(())
}

/// `1/(αk)`, rejected when above one.
pub fn sorted_scale(inst: &PipInstance, alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(invalid(format!("alpha must be positive, got {alpha}")));
    }
    let scale = 1.0 / (alpha * k_of(inst) as f64);
    if scale > 1.0 {
        return Err(invalid(format!("alpha * k = {} is below one", 1.0 / scale)));
    }
    Ok(scale)
}

/// Best feasible set by enumeration of all subsets (`n ≤ 20`).
pub fn exact_submodular_optimum(f: &impl ValueOracle, inst: &PipInstance) -> Result<(ItemSet, f64)> {
    if f.n() != inst.n() {
        return Err(invalid(format!("oracle has {} items, instance has {}", f.n(), inst.n())));
    }
    if !inst.has_unit_bounds() {
        return Err(precondition("subset enumeration needs unit upper bounds"));
    }
    let table = ValueTable::new(f)?;
    let n = inst.n();
    let (mask, value) = table
        .best_where(|m| inst.check_feasible(&ItemSet::from_mask(n, m)).unwrap_or(false))
        .expect("the empty set is always feasible");
    Ok((ItemSet::from_mask(n, mask), value))
}

/// `E[f(S)]` against `p·F(x)` for `S` sampled at `p·x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodSCheck {
    pub mean: MeanEstimate,
    pub target: f64,
    pub holds: bool,
}

/// Passes when the Monte Carlo mean of `f(S)` is at least `p·F(x) − 3 SE`.
pub fn check_good_s(f: &impl ValueOracle, x: &[f64], p: f64, trials: u64, seed: u64) -> Result<GoodSCheck> {
    validate_point(f.n(), x)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p = {p} outside [0, 1]")));
    }
    if trials == 0 {
        return Err(invalid("trials must be at least one"));
    }
    let target = p * multilinear_exact(f, x)?;
    let probs: Vec<f64> = x.iter().map(|v| p * v).collect();
    let [m] = parallel_moments(trials, seed, |rng| {
        let mut members = vec![false; probs.len()];
        sample_members(&probs, rng, &mut members);
        [f.value(&members)]
    });
    let mean = m.estimate();
    Ok(GoodSCheck {
        mean,
        target,
        holds: mean.mean >= target - 3.0 * mean.se,
    })
}
