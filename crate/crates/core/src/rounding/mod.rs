//! Randomized rounding with alteration.
//!
//! Every algorithm samples each item independently with probability
//! `scale · x_i` and then applies a deterministic [`AlterationRule`]:
//!
//! | algorithm  | relaxation   | scale      | rule          |
//! |------------|--------------|------------|---------------|
//! | simple     | natural      | `1/(αk)`   | big/small     |
//! | strong     | strengthened | `1/(αk)`   | sorted prefix |
//! | large-b    | natural      | `1/α`      | powers of two |
//! | strawman   | natural      | `1/(2k)`   | discard row   |
//!
//! The strawman is kept only as a negative example: its per-item retention
//! collapses on instances mixing one big item with many small ones.

mod alteration;
pub mod bounds;
mod retention;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, precondition, Result};
use crate::instance::{FractionalSolution, ItemSet, PipInstance};
use crate::lp::BigItemIndex;
use crate::rng::TrialSeed;

pub use alteration::{
    alter_powers_of_two, alter_simple, alter_sorted, check_survival_monotone, round_up_power_of_two,
    Alteration, AlterationRule, CauseKind, DeletionCause, MonotonicityCheck, PreparedAlteration,
};
pub use retention::{estimate_retention, ItemRetention, RetentionEstimate};

/// Tolerance used when checking that a supplied `x` is LP-feasible.
const X_FEASIBILITY_TOL: f64 = 1e-7;

/// Per-trial trace of a rounding run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundingReport {
    pub seed: u64,
    pub trial: u64,
    pub rule: AlterationRule,
    pub alpha: f64,
    /// Sampling probability multiplier applied to `x`.
    pub scale: f64,
    pub sampled: ItemSet,
    pub causes: Vec<DeletionCause>,
    pub survivors: ItemSet,
    pub value: f64,
}

impl RoundingReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Draws `S` with `Pr[i ∈ S] = scale · x_i`, independently per item. One
/// uniform is consumed per item regardless of `x_i`.
pub fn sample_with_rng(x: &[f64], scale: f64, rng: &mut impl Rng) -> Result<ItemSet> {
    validate_scale(x, scale)?;
    let mut set = ItemSet::empty(x.len());
    for (i, &xi) in x.iter().enumerate() {
        if rng.gen::<f64>() < scale * xi {
            set.insert(i);
        }
    }
    Ok(set)
}

pub fn sample_independent(x: &FractionalSolution, scale: f64, seed: impl Into<TrialSeed>) -> Result<ItemSet> {
    sample_with_rng(&x.x, scale, &mut seed.into().rng())
}

pub(crate) fn validate_scale(x: &[f64], scale: f64) -> Result<()> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(invalid(format!("scale {scale} outside (0, 1]")));
    }
    for (i, &xi) in x.iter().enumerate() {
        if !(xi.is_finite() && xi >= 0.0) {
            return Err(invalid(format!("x[{i}] = {xi} is not a nonnegative number")));
        }
        if scale * xi > 1.0 + 1e-12 {
            return Err(invalid(format!(
                "sampling probability scale * x[{i}] = {} exceeds one",
                scale * xi
            )));
        }
    }
    Ok(())
}

/// The rounding algorithms, with their sampling scale and alteration rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "kebab-case")]
pub enum Algorithm {
    Simple { alpha: f64 },
    Strong { alpha: f64 },
    LargeB,
    Strawman,
}

impl Algorithm {
    pub const SIMPLE_DEFAULT_ALPHA: f64 = 4.0;
    pub const STRONG_DEFAULT_ALPHA: f64 = 1.0;

    pub fn simple() -> Self {
        Algorithm::Simple {
            alpha: Self::SIMPLE_DEFAULT_ALPHA,
        }
    }

    pub fn strong() -> Self {
        Algorithm::Strong {
            alpha: Self::STRONG_DEFAULT_ALPHA,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Simple { .. } => "simple",
            Algorithm::Strong { .. } => "strong",
            Algorithm::LargeB => "large-b",
            Algorithm::Strawman => "strawman",
        }
    }

    pub fn rule(&self) -> AlterationRule {
        match self {
            Algorithm::Simple { .. } => AlterationRule::Simple,
            Algorithm::Strong { .. } => AlterationRule::Sorted,
            Algorithm::LargeB => AlterationRule::PowersOfTwo,
            Algorithm::Strawman => AlterationRule::Strawman,
        }
    }

    /// `α` for this instance; the large-capacity variant derives it from `k`
    /// and the slack.
    pub fn alpha(&self, inst: &PipInstance) -> Result<f64> {
        match *self {
            Algorithm::Simple { alpha } | Algorithm::Strong { alpha } => {
                if alpha.is_finite() && alpha > 0.0 {
                    Ok(alpha)
                } else {
                    Err(invalid(format!("alpha must be positive, got {alpha}")))
                }
            }
            Algorithm::LargeB => Ok(bounds::large_b_alpha(k_of(inst), slack_floor(inst)?)),
            Algorithm::Strawman => Ok(2.0),
        }
    }

    pub fn scale(&self, inst: &PipInstance) -> Result<f64> {
        let alpha = self.alpha(inst)?;
        let scale = match self {
            Algorithm::LargeB => 1.0 / alpha,
            _ => 1.0 / (alpha * k_of(inst) as f64),
        };
        if scale > 1.0 {
            return Err(invalid(format!(
                "alpha * k = {} is below one; sampling probabilities would exceed x",
                1.0 / scale
            )));
        }
        Ok(scale)
    }

    /// Guaranteed lower bound on `Pr[i ∈ S′ | i ∈ S]`, when one exists. For
    /// the strawman this is the bound its flawed argument claims.
    pub fn retention_bound(&self, inst: &PipInstance) -> Result<f64> {
        let k = k_of(inst);
        Ok(match *self {
            Algorithm::Simple { alpha } => bounds::simple_retention(alpha),
            Algorithm::Strong { alpha } => bounds::sorted_retention(alpha, k),
            Algorithm::LargeB => bounds::large_b_retention(k, slack_floor(inst)?),
            Algorithm::Strawman => 0.5,
        })
    }

    /// Checks the instance normalization and that `x` lies in the
    /// relaxation this algorithm expects.
    pub fn check_preconditions(&self, inst: &PipInstance, x: &[f64]) -> Result<()> {
        if x.len() != inst.n() {
            return Err(invalid(format!("x has {} entries, instance has {} items", x.len(), inst.n())));
        }
        if let Some(i) = x.iter().position(|&v| !(-X_FEASIBILITY_TOL..=1.0 + X_FEASIBILITY_TOL).contains(&v)) {
            return Err(precondition(format!("x[{i}] = {} outside [0, 1]", x[i])));
        }
        if inst.upper_bounds().iter().any(|&u| u > 1) {
            return Err(precondition(
                "0/1 rounding needs unit upper bounds; use round_general_upper_bounds",
            ));
        }
        match self {
            Algorithm::Simple { .. } | Algorithm::Strong { .. } => {
                if !inst.is_unit_capacity() {
                    return Err(precondition("instance must be normalized to unit capacities"));
                }
            }
            Algorithm::LargeB => {
                if !inst.is_unit_max_size() {
                    return Err(precondition("instance must be normalized to unit maximum size per row"));
                }
                slack_floor(inst)?;
            }
            Algorithm::Strawman => {}
        }
        check_rows(inst, x)?;
        if let Algorithm::Strong { .. } = self {
            let big = BigItemIndex::new(inst);
            for (j, items) in big.per_constraint.iter().enumerate() {
                let total: f64 = items.iter().map(|&i| x[i]).sum();
                if total > 1.0 + X_FEASIBILITY_TOL {
                    return Err(precondition(format!(
                        "x violates the big-item row of constraint {j} ({total} > 1)"
                    )));
                }
            }
        }
        Ok(())
    }

    /// One sample-and-alter trial.
    pub fn round(&self, inst: &PipInstance, x: &FractionalSolution, seed: impl Into<TrialSeed>) -> Result<RoundingReport> {
        self.check_preconditions(inst, &x.x)?;
        let seed = seed.into();
        let alpha = self.alpha(inst)?;
        let scale = self.scale(inst)?;
        let sampled = sample_with_rng(&clamp_unit(&x.x), scale, &mut seed.rng())?;
        let alteration = PreparedAlteration::new(inst, self.rule())?.alter(&sampled);
        let value = inst.value(&alteration.survivors)?;
        Ok(RoundingReport {
            seed: seed.seed,
            trial: seed.trial,
            rule: self.rule(),
            alpha,
            scale,
            sampled,
            causes: alteration.causes,
            survivors: alteration.survivors,
            value,
        })
    }

    /// Monte Carlo retention statistics for this algorithm.
    pub fn estimate(&self, inst: &PipInstance, x: &FractionalSolution, trials: u64, seed: u64) -> Result<RetentionEstimate> {
        self.check_preconditions(inst, &x.x)?;
        let clamped = FractionalSolution::new(clamp_unit(&x.x), x.objective);
        estimate_retention(inst, &clamped, self.rule(), self.scale(inst)?, trials, seed)
    }
}

fn clamp_unit(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.clamp(0.0, 1.0)).collect()
}

fn check_rows(inst: &PipInstance, x: &[f64]) -> Result<()> {
    for j in 0..inst.m() {
        let load: f64 = inst.row(j).iter().map(|&(i, s)| s * x[i]).sum();
        let cap = inst.capacities()[j];
        if load > cap + X_FEASIBILITY_TOL * cap.max(1.0) {
            return Err(precondition(format!(
                "x violates constraint {j} ({load} > {cap})"
            )));
        }
    }
    Ok(())
}

/// `k` as used by the sampling scale: column sparsity, at least one.
pub(crate) fn k_of(inst: &PipInstance) -> usize {
    inst.column_sparsity().max(1)
}

/// `⌊B⌋` for an instance normalized to unit maximum size; fails when `B < 1`.
pub(crate) fn slack_floor(inst: &PipInstance) -> Result<u32> {
    let b = match inst.slack() {
        Ok(b) => b,
        // no entries: every set is feasible, any B works
        Err(_) => return Ok(1),
    };
    if b < 1.0 - 1e-12 {
        return Err(precondition(format!("slack B = {b} is below one")));
    }
    Ok((b + 1e-9).floor() as u32)
}

/// Simple algorithm: natural-LP `x`, scale `1/(αk)`, big/small alteration.
pub fn round_simple(inst: &PipInstance, x: &FractionalSolution, alpha: f64, seed: impl Into<TrialSeed>) -> Result<RoundingReport> {
    Algorithm::Simple { alpha }.round(inst, x, seed)
}

/// Strengthened-LP `x`, scale `1/(αk)`, sorted-prefix alteration.
pub fn round_strong(inst: &PipInstance, x: &FractionalSolution, alpha: f64, seed: impl Into<TrialSeed>) -> Result<RoundingReport> {
    Algorithm::Strong { alpha }.round(inst, x, seed)
}

/// Large-capacity variant on an instance with unit maximum size per row.
pub fn round_large_b(inst: &PipInstance, x: &FractionalSolution, seed: impl Into<TrialSeed>) -> Result<RoundingReport> {
    Algorithm::LargeB.round(inst, x, seed)
}

pub fn strawman_round(inst: &PipInstance, x: &FractionalSolution, seed: impl Into<TrialSeed>) -> Result<ItemSet> {
    Ok(Algorithm::Strawman.round(inst, x, seed)?.survivors)
}

/// Outcome of rounding with general integer upper bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundRounding {
    /// The better of the two candidates below.
    pub solution: ItemSet,
    pub value: f64,
    /// `⌊y⌋`.
    pub integral_part: ItemSet,
    /// 0/1 rounding of `y − ⌊y⌋`.
    pub rounded_fraction: ItemSet,
}

/// Splits `y` into `⌊y⌋` and its fractional part, rounds the fractional part
/// with `rounder` on the unit-bound instance, and returns the better of the
/// two integral candidates.
pub fn round_general_upper_bounds<F>(inst: &PipInstance, y: &FractionalSolution, rounder: F) -> Result<UpperBoundRounding>
where
    F: FnOnce(&PipInstance, &FractionalSolution) -> Result<ItemSet>,
{
    if y.len() != inst.n() {
        return Err(invalid(format!("y has {} entries, instance has {} items", y.len(), inst.n())));
    }
    let mut floor = Vec::with_capacity(y.len());
    let mut frac = Vec::with_capacity(y.len());
    for (&v, &u) in y.x.iter().zip(inst.upper_bounds()) {
        let v = v.clamp(0.0, f64::from(u));
        let z = (v + 1e-9).floor();
        floor.push(z as u32);
        frac.push((v - z).clamp(0.0, 1.0));
    }
    let integral_part = ItemSet::from_counts(floor);
    if !inst.check_feasible(&integral_part)? {
        return Err(precondition("floor of y is infeasible; y is not LP-feasible"));
    }
    let unit = inst.with_unit_bounds();
    let x = FractionalSolution::with_weights(frac, unit.weights());
    let rounded_fraction = rounder(&unit, &x)?;
    if !unit.check_feasible(&rounded_fraction)? {
        return Err(precondition("rounder returned an infeasible set"));
    }
    let z_value = inst.value(&integral_part)?;
    let r_value = inst.value(&rounded_fraction)?;
    let (solution, value) = if r_value > z_value {
        (rounded_fraction.clone(), r_value)
    } else {
        (integral_part.clone(), z_value)
    };
    Ok(UpperBoundRounding {
        solution,
        value,
        integral_part,
        rounded_fraction,
    })
}
