use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::multilinear::{sample_members, validate_point, PairMoments};
use super::{MeanEstimate, ValueOracle};
use crate::error::{invalid, precondition, Error, Result};
use crate::instance::{FractionalSolution, PipInstance};
use crate::rng::trial_rng;
use crate::rounding::{check_survival_monotone, AlterationRule, MonotonicityCheck, PreparedAlteration};

const PROB_TOL: f64 = 1e-9;

/// Slack allowed in the enumerated inequality.
pub const SUBADDITIVITY_TOL: f64 = 1e-12;

/// A randomized alteration: for every `B ⊆ [n]` a distribution `q_B` over
/// subsets `A ⊆ B`, stored as `(mask of A, probability)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlterationFamily {
    n: usize,
    dists: Vec<Vec<(u64, f64)>>,
}

/// A violation of `r_B(i) ≥ r_{B′}(i)` for `B ⊆ B′`, `i ∈ B`, where
/// `r_B(i) = Σ_{A ∋ i} q_B(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyViolation {
    pub smaller: u64,
    pub larger: u64,
    pub item: usize,
    pub gap: f64,
}

impl AlterationFamily {
    pub const MAX_N: usize = 10;

    pub fn new(n: usize, dists: Vec<Vec<(u64, f64)>>) -> Result<Self> {
        if n > Self::MAX_N {
            return Err(Error::TooLarge(format!("alteration families need n <= {}, got {n}", Self::MAX_N)));
        }
        if dists.len() != 1 << n {
            return Err(invalid(format!("expected {} distributions, got {}", 1u64 << n, dists.len())));
        }
        for (b, dist) in dists.iter().enumerate() {
            let b = b as u64;
            let mut total = 0.0;
            for &(a, q) in dist {
                if a & !b != 0 {
                    return Err(invalid(format!("q_B for B = {b:#b} puts mass on {a:#b}, not a subset")));
                }
                if !(q.is_finite() && q >= 0.0) {
                    return Err(invalid(format!("q_B for B = {b:#b} has probability {q}")));
                }
                total += q;
            }
            if (total - 1.0).abs() > PROB_TOL {
                return Err(invalid(format!("q_B for B = {b:#b} sums to {total}")));
            }
        }
        Ok(AlterationFamily { n, dists })
    }

    /// `q_B(B) = 1` for every `B`.
    pub fn identity(n: usize) -> Result<Self> {
        Self::deterministic(n, |b| b)
    }

    /// `q_B` is the point mass on `alter(B)`.
    pub fn deterministic(n: usize, alter: impl Fn(u64) -> u64) -> Result<Self> {
        if n > Self::MAX_N {
            return Err(Error::TooLarge(format!("alteration families need n <= {}, got {n}", Self::MAX_N)));
        }
        Self::new(n, (0..1u64 << n).map(|b| vec![(alter(b), 1.0)]).collect())
    }

    /// `q_{[n]}` picks `A_t` with probability `λ_t / Σλ`; every other `B` is
    /// kept whole.
    pub fn fractional_cover(n: usize, cover: &[(u64, f64)]) -> Result<Self> {
        let total: f64 = cover.iter().map(|c| c.1).sum();
        if total.is_nan() || total <= 0.0 {
            return Err(invalid("fractional cover needs positive total weight"));
        }
        let full = (1u64 << n) - 1;
        let mut dists: Vec<Vec<(u64, f64)>> = (0..1u64 << n).map(|b| vec![(b, 1.0)]).collect();
        dists[full as usize] = cover.iter().map(|&(a, l)| (a, l / total)).collect();
        Self::new(n, dists)
    }

    /// Convex combination `Σ c_t q^t_B`.
    pub fn mixture(components: &[(f64, &AlterationFamily)]) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(invalid("mixture needs at least one component"));
        };
        let total: f64 = components.iter().map(|c| c.0).sum();
        if components.iter().any(|c| c.1.n != first.n || c.0.is_nan() || c.0 < 0.0) || total.is_nan() || total <= 0.0 {
            return Err(invalid("mixture components need equal n and nonnegative weights"));
        }
        let dists = (0..first.dists.len())
            .map(|b| {
                let mut merged: Vec<(u64, f64)> = Vec::new();
                for &(c, fam) in components {
                    for &(a, q) in &fam.dists[b] {
                        match merged.iter_mut().find(|e| e.0 == a) {
                            Some(e) => e.1 += c / total * q,
                            None => merged.push((a, c / total * q)),
                        }
                    }
                }
                merged
            })
            .collect();
        Self::new(first.n, dists)
    }

    /// Random family satisfying the monotonicity condition, as a mixture of
    /// up to three components drawn from:
    /// threshold maps `A = {i ∈ B : θ_i ≥ |B|}`; the sorted-prefix rule on
    /// a random single knapsack; and independent retention with
    /// probability `ρ_i^{|B|}`. Candidates failing the exhaustive check are
    /// discarded.
    pub fn random_monotone(n: usize, rng: &mut impl Rng) -> Result<Self> {
        loop {
            let parts = rng.gen_range(1..=3);
            let mut fams = Vec::with_capacity(parts);
            for _ in 0..parts {
                fams.push((rng.gen_range(0.1..1.0), random_component(n, rng)?));
            }
            let refs: Vec<(f64, &AlterationFamily)> = fams.iter().map(|(c, f)| (*c, f)).collect();
            let fam = Self::mixture(&refs)?;
            if fam.check_monotone().is_none() {
                return Ok(fam);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn distribution(&self, b: u64) -> &[(u64, f64)] {
        &self.dists[b as usize]
    }

    /// `r_B(i) = Σ_{A ⊆ B, i ∈ A} q_B(A)`.
    pub fn retention(&self, b: u64, item: usize) -> f64 {
        self.dists[b as usize]
            .iter()
            .filter(|(a, _)| a >> item & 1 == 1)
            .map(|(_, q)| q)
            .sum()
    }

    /// First violation of the monotonicity condition, if any. Checking
    /// single-element extensions suffices, since chains compose.
    pub fn check_monotone(&self) -> Option<FamilyViolation> {
        for b in 0..1u64 << self.n {
            for other in (0..self.n).filter(|&o| b >> o & 1 == 0) {
                let larger = b | 1 << other;
                for item in (0..self.n).filter(|&i| b >> i & 1 == 1) {
                    let gap = self.retention(larger, item) - self.retention(b, item);
                    if gap > PROB_TOL {
                        return Some(FamilyViolation {
                            smaller: b,
                            larger,
                            item,
                            gap,
                        });
                    }
                }
            }
        }
        None
    }
}

fn random_component(n: usize, rng: &mut impl Rng) -> Result<AlterationFamily> {
    match rng.gen_range(0..3) {
        0 => {
            let theta: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=n.max(1) as u32)).collect();
            AlterationFamily::deterministic(n, |b| {
                let size = b.count_ones();
                (0..n).filter(|&i| b >> i & 1 == 1 && theta[i] >= size).fold(0, |a, i| a | 1 << i)
            })
        }
        1 => {
            let sizes: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..=1.0)).collect();
            AlterationFamily::deterministic(n, |b| {
                let members = || (0..n).filter(move |&i| b >> i & 1 == 1);
                members()
                    .filter(|&i| members().filter(|&j| sizes[j] >= sizes[i]).map(|j| sizes[j]).sum::<f64>() <= 1.0)
                    .fold(0, |a, i| a | 1 << i)
            })
        }
        _ => {
            let rho: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..=1.0)).collect();
            let dists = (0..1u64 << n)
                .map(|b| {
                    let keep: Vec<(usize, f64)> = (0..n)
                        .filter(|&i| b >> i & 1 == 1)
                        .map(|i| (i, rho[i].powi(b.count_ones() as i32)))
                        .collect();
                    (0..1u64 << keep.len())
                        .map(|sub| {
                            let mut a = 0;
                            let mut q = 1.0;
                            for (t, &(i, r)) in keep.iter().enumerate() {
                                if sub >> t & 1 == 1 {
                                    a |= 1 << i;
                                    q *= r;
                                } else {
                                    q *= 1.0 - r;
                                }
                            }
                            (a, q)
                        })
                        .collect()
                })
                .collect();
            AlterationFamily::new(n, dists)
        }
    }
}

/// Both sides of `Σ_B p(B) Σ_A q_B(A) f(A) ≥ β Σ_B p(B) f(B)` for the
/// product distribution `p` of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityCheck {
    pub lhs: f64,
    /// `Σ_B p(B) f(B)`, without the factor `β`.
    pub rhs: f64,
    /// Largest `β` satisfying the marginal condition for every item with
    /// `x_i > 0`; 1 when there is none.
    pub beta: f64,
    pub holds: bool,
}

/// Enumerates both sides exactly. The family must satisfy the
/// monotonicity condition; otherwise a precondition error is returned and
/// nothing is evaluated.
pub fn check_subadditivity(f: &impl ValueOracle, x: &[f64], fam: &AlterationFamily) -> Result<SubadditivityCheck> {
    let n = fam.n;
    if f.n() != n {
        return Err(invalid(format!("oracle has {} items, family has {n}", f.n())));
    }
    validate_point(n, x)?;
    if let Some(v) = fam.check_monotone() {
        return Err(precondition(format!(
            "family is not monotone: item {} has retention {} higher in {:#b} than in {:#b}",
            v.item, v.gap, v.larger, v.smaller
        )));
    }
    let values: Vec<f64> = (0..1u64 << n).map(|m| f.value_of_mask(m)).collect();
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    let mut kept = vec![0.0; n];
    for b in 0..1u64 << n {
        let p: f64 = (0..n).map(|i| if b >> i & 1 == 1 { x[i] } else { 1.0 - x[i] }).product();
        if p == 0.0 {
            continue;
        }
        rhs += p * values[b as usize];
        for &(a, q) in fam.distribution(b) {
            lhs += p * q * values[a as usize];
            for (i, k) in kept.iter_mut().enumerate() {
                if a >> i & 1 == 1 {
                    *k += p * q;
                }
            }
        }
    }
    // Pr[i ∈ B] = x_i under the product distribution
    let beta = (0..n)
        .filter(|&i| x[i] > 0.0)
        .map(|i| kept[i] / x[i])
        .fold(1.0f64, f64::min);
    Ok(SubadditivityCheck {
        lhs,
        rhs,
        beta,
        holds: lhs >= beta * rhs - SUBADDITIVITY_TOL,
    })
}

/// Monte Carlo statistics of `f(S)` and `f(S′)` over paired trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlteredValueEstimate {
    pub sampled: MeanEstimate,
    pub altered: MeanEstimate,
    /// Per item: trials with `i ∈ S` and with `i ∈ S′`.
    pub sampled_counts: Vec<u64>,
    pub retained_counts: Vec<u64>,
    /// `min_i Pr[i ∈ S′ | i ∈ S]` over items sampled at least once; 1 if
    /// none was.
    pub beta_hat: f64,
    /// Standard error of `mean f(S′) − β̂ · mean f(S)`.
    pub difference_se: f64,
}

/// Samples `S` at `scale · x` (trial `t` uses stream `t` of `seed`), applies
/// `survivors` to the mask of `S`, and records `f(S)`, `f(S′)` and
/// per-item retention. Requires `n ≤ 64`.
pub fn estimate_altered_value(
    f: &impl ValueOracle,
    x: &[f64],
    scale: f64,
    survivors: &(impl Fn(u64) -> u64 + Sync),
    trials: u64,
    seed: u64,
) -> Result<AlteredValueEstimate> {
    let n = f.n();
    validate_point(n, x)?;
    if n > 64 {
        return Err(Error::TooLarge(format!("mask-based alteration needs n <= 64, got {n}")));
    }
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(invalid(format!("scale {scale} outside (0, 1]")));
    }
    if trials == 0 {
        return Err(invalid("trials must be at least one"));
    }
    let probs: Vec<f64> = x.iter().map(|v| scale * v).collect();
    const CHUNK: u64 = 2048;
    let chunks: Vec<(PairMoments, Vec<u64>, Vec<u64>)> = (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut pm = PairMoments::default();
            let mut sampled = vec![0u64; n];
            let mut retained = vec![0u64; n];
            let mut members = vec![false; n];
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                sample_members(&probs, &mut trial_rng(seed, t), &mut members);
                let s = members.iter().enumerate().filter(|m| *m.1).fold(0u64, |a, (i, _)| a | 1 << i);
                let kept = survivors(s) & s;
                for i in 0..n {
                    sampled[i] += s >> i & 1;
                    retained[i] += kept >> i & 1;
                }
                pm.push(f.value_of_mask(kept), f.value_of_mask(s));
            }
            (pm, sampled, retained)
        })
        .collect();
    let mut pm = PairMoments::default();
    let mut sampled_counts = vec![0u64; n];
    let mut retained_counts = vec![0u64; n];
    for (p, s, r) in chunks {
        pm.merge(p);
        sampled_counts.iter_mut().zip(s).for_each(|(a, b)| *a += b);
        retained_counts.iter_mut().zip(r).for_each(|(a, b)| *a += b);
    }
    let beta_hat = sampled_counts
        .iter()
        .zip(&retained_counts)
        .filter(|(&s, _)| s > 0)
        .map(|(&s, &r)| r as f64 / s as f64)
        .fold(1.0f64, f64::min);
    Ok(AlteredValueEstimate {
        sampled: pm.b.estimate(),
        altered: pm.a.estimate(),
        sampled_counts,
        retained_counts,
        beta_hat,
        difference_se: pm.difference_se(beta_hat),
    })
}

/// `E[f(S′)]` against `β̂ E[f(S)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetainedValueCheck {
    pub estimate: AlteredValueEstimate,
    /// `mean f(S′) − β̂ · mean f(S)`.
    pub slack: f64,
    pub holds: bool,
}

/// Verifies survival monotonicity by enumeration (`n ≤ 16`), then checks
/// `E[f(S′)] ≥ β̂ E[f(S)] − 3 SE` with `β̂` the smallest empirical retention.
pub fn check_retained_value_with(
    f: &impl ValueOracle,
    x: &[f64],
    scale: f64,
    survivors: &(impl Fn(u64) -> u64 + Sync),
    trials: u64,
    seed: u64,
) -> Result<RetainedValueCheck> {
    if let MonotonicityCheck::Violated { smaller, larger, item } = check_survival_monotone(survivors, f.n())? {
        return Err(precondition(format!(
            "alteration is not monotone: item {item} survives {larger:#b} but not its subset {smaller:#b}"
        )));
    }
    let estimate = estimate_altered_value(f, x, scale, survivors, trials, seed)?;
    let slack = estimate.altered.mean - estimate.beta_hat * estimate.sampled.mean;
    let holds = slack >= -3.0 * estimate.difference_se;
    Ok(RetainedValueCheck { estimate, slack, holds })
}

pub fn check_retained_value(
    f: &impl ValueOracle,
    inst: &PipInstance,
    rule: AlterationRule,
    x: &FractionalSolution,
    scale: f64,
    trials: u64,
    seed: u64,
) -> Result<RetainedValueCheck> {
    if f.n() != inst.n() {
        return Err(invalid(format!("oracle has {} items, instance has {}", f.n(), inst.n())));
    }
    let prepared = PreparedAlteration::new(inst, rule)?;
    check_retained_value_with(f, &x.x, scale, &|s| prepared.survivors_of_mask(s), trials, seed)
}
