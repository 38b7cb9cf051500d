//! Instance families with known integrality gaps, and a seeded random
//! generator for experiments.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::instance::{FractionalSolution, PipInstance};
use crate::rng::trial_rng;

/// Limit on the number of constraints [`gen_gap_general_b`] will build.
pub const GENERAL_B_MAX_CONSTRAINTS: u64 = 1_000_000;

/// `n = m = 2k − 1` items on a cycle: `s_ii = 1`, `s_ij = ε` for the next
/// `k − 1` constraints. Any two items conflict, while `x ≈ 1` is
/// LP-feasible. `epsilon` defaults to `1/(10nk)` and must be below `1/(nk)`.
pub fn gen_gap_2k_minus_1(k: usize, epsilon: Option<f64>) -> Result<PipInstance> {
    if k == 0 {
        return Err(invalid("k must be at least one"));
    }
    let n = 2 * k - 1;
    let limit = 1.0 / (n * k) as f64;
    let eps = epsilon.unwrap_or(limit / 10.0);
    if !(eps > 0.0 && eps < limit) {
        return Err(invalid(format!("epsilon = {eps} must lie in (0, 1/(nk)) = (0, {limit})")));
    }
    let entries = (0..n).flat_map(|i| {
        std::iter::once((i, i, 1.0)).chain((1..k).map(move |d| (i, (i + d) % n, eps)))
    });
    Ok(PipInstance::new(vec![1.0; n], vec![1.0; n], entries)?)
}

/// `s_ii = 1`, `s_ij = 1/n` otherwise, unit weights and capacities. Every
/// column has ℓ1 norm below 2, yet only one item fits.
pub fn gen_l1_bad_example(n: usize) -> Result<PipInstance> {
    if n < 2 {
        return Err(invalid(format!("n must be at least 2, got {n}")));
    }
    let off = 1.0 / n as f64;
    let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j, if i == j { 1.0 } else { off })));
    Ok(PipInstance::new(vec![1.0; n], vec![1.0; n], entries)?)
}

/// One constraint of capacity `B` per `(t+1)`-subset of the `n` items
/// (`t = ⌊B⌋`), in lexicographic order, with unit sizes on its members.
/// Integral solutions have at most `t` items; `x = t/(t+1)` is LP-feasible.
pub fn gen_gap_general_b(n: usize, b: f64) -> Result<PipInstance> {
    if !(b.is_finite() && b >= 1.0) {
        return Err(invalid(format!("B must be at least 1, got {b}")));
    }
    let t = b.floor() as usize;
    if t + 1 > n {
        return Err(invalid(format!("need t + 1 <= n, got t = {t}, n = {n}")));
    }
    let m = binomial(n as u64, t as u64 + 1);
    if m > GENERAL_B_MAX_CONSTRAINTS {
        return Err(Error::TooLarge(format!(
            "C({n}, {}) = {m} constraints exceeds {GENERAL_B_MAX_CONSTRAINTS}",
            t + 1
        )));
    }
    let mut entries = Vec::with_capacity(m as usize * (t + 1));
    let mut subset: Vec<usize> = (0..=t).collect();
    let mut j = 0;
    loop {
        entries.extend(subset.iter().map(|&i| (i, j, 1.0)));
        j += 1;
        // advance to the next combination in lexicographic order
        let Some(pos) = (0..=t).rev().find(|&p| subset[p] < n - (t + 1) + p) else {
            break;
        };
        subset[pos] += 1;
        for q in pos + 1..=t {
            subset[q] = subset[q - 1] + 1;
        }
    }
    Ok(PipInstance::new(vec![1.0; n], vec![b; m as usize], entries)?)
}

pub(crate) fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// The single constraint `M x_1 + x_2 + … + x_M ≤ M` with unit weights,
/// together with the LP-feasible point `x = ½`.
pub fn gen_strawman_counterexample(m: usize) -> Result<(PipInstance, FractionalSolution)> {
    if m < 2 {
        return Err(invalid(format!("M must be at least 2, got {m}")));
    }
    let entries = (0..m).map(|i| (i, 0, if i == 0 { m as f64 } else { 1.0 }));
    let inst = PipInstance::new(vec![1.0; m], vec![m as f64], entries)?;
    let x = FractionalSolution::with_weights(vec![0.5; m], inst.weights());
    Ok((inst, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "kebab-case")]
pub enum SizeProfile {
    /// Uniform on `(0, 1]`.
    Uniform,
    /// Big (`(½, 1]`) with probability `big_fraction`, else small (`(0, ½]`).
    Mixed { big_fraction: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "kebab-case")]
pub enum WeightProfile {
    Unit,
    Uniform { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomConfig {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub sizes: SizeProfile,
    /// Probability that each of an item's `k` rows is kept.
    pub density: f64,
    pub weights: WeightProfile,
    pub seed: u64,
}

impl RandomConfig {
    pub fn new(n: usize, m: usize, k: usize, seed: u64) -> Self {
        RandomConfig {
            n,
            m,
            k,
            sizes: SizeProfile::Uniform,
            density: 1.0,
            weights: WeightProfile::Unit,
            seed,
        }
    }
}

/// Each item draws a uniform `k`-subset of rows, keeps each row with
/// probability `density`, and draws sizes from the profile. Capacities are
/// one.
pub fn gen_random(cfg: &RandomConfig) -> Result<PipInstance> {
    if cfg.k > cfg.m {
        return Err(invalid(format!("k = {} exceeds m = {}", cfg.k, cfg.m)));
    }
    if !(0.0..=1.0).contains(&cfg.density) {
        return Err(invalid(format!("density {} outside [0, 1]", cfg.density)));
    }
    if let SizeProfile::Mixed { big_fraction } = cfg.sizes {
        if !(0.0..=1.0).contains(&big_fraction) {
            return Err(invalid(format!("big_fraction {big_fraction} outside [0, 1]")));
        }
    }
    if let WeightProfile::Uniform { lo, hi } = cfg.weights {
        if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
            return Err(invalid(format!("weight range [{lo}, {hi}] is invalid")));
        }
    }
    let mut rng = trial_rng(cfg.seed, 0);
    let mut entries = Vec::new();
    let mut weights = Vec::with_capacity(cfg.n);
    for i in 0..cfg.n {
        weights.push(match cfg.weights {
            WeightProfile::Unit => 1.0,
            WeightProfile::Uniform { lo, hi } => lo + (hi - lo) * rng.gen::<f64>(),
        });
        let mut rows = sample(&mut rng, cfg.m, cfg.k).into_vec();
        rows.sort_unstable();
        for j in rows {
            if rng.gen::<f64>() >= cfg.density {
                continue;
            }
            // 1 − u lies in (0, 1]
            let u = 1.0 - rng.gen::<f64>();
            let size = match cfg.sizes {
                SizeProfile::Uniform => u,
                SizeProfile::Mixed { big_fraction } => {
                    if rng.gen::<f64>() < big_fraction {
                        0.5 + 0.5 * u
                    } else {
                        0.5 * u
                    }
                }
            };
            entries.push((i, j, size.min(1.0)));
        }
    }
    Ok(PipInstance::new(weights, vec![1.0; cfg.m], entries)?)
}

/// [`gen_random`] normalized to unit maximum size per row, with every
/// capacity set to `b`, so the slack is exactly `b`.
pub fn gen_random_with_slack(cfg: &RandomConfig, b: f64) -> Result<PipInstance> {
    if !(b.is_finite() && b >= 1.0) {
        return Err(invalid(format!("B must be at least 1, got {b}")));
    }
    let inst = gen_random(cfg)?.normalize_unit_max_size();
    Ok(inst.with_capacities(vec![b; cfg.m])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::ItemSet;

    #[test]
    fn gap_2k_minus_1_shapes() {
        let one = gen_gap_2k_minus_1(1, None).unwrap();
        assert_eq!((one.n(), one.m(), one.size(0, 0)), (1, 1, 1.0));
        let two = gen_gap_2k_minus_1(2, Some(1e-3)).unwrap();
        assert_eq!((two.n(), two.m(), two.column_sparsity()), (3, 3, 2));
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            assert_eq!(two.size(i, j), 1e-3);
        }
        assert_eq!(two.size(0, 2), 0.0);
        assert!(two.check_feasible(&ItemSet::from_indices(3, [1])).unwrap());
        assert_eq!(gen_gap_2k_minus_1(4, None).unwrap().column_sparsity(), 4);
        assert!(gen_gap_2k_minus_1(2, Some(1.0 / 6.0)).is_err());
        assert!(gen_gap_2k_minus_1(2, Some(0.0)).is_err());
    }

    #[test]
    fn l1_example_shape() {
        let inst = gen_l1_bad_example(2).unwrap();
        assert_eq!(inst.size(0, 1), 0.5);
        assert_eq!(inst.size(1, 1), 1.0);
        let inst = gen_l1_bad_example(7).unwrap();
        for i in 0..7 {
            let norm: f64 = inst.column(i).iter().map(|e| e.1).sum();
            assert!(norm <= 2.0);
        }
        assert!(gen_l1_bad_example(1).is_err());
    }

    #[test]
    fn general_b_shape() {
        let inst = gen_gap_general_b(4, 2.0).unwrap();
        assert_eq!((inst.m(), inst.column_sparsity()), (4, 3));
        assert_eq!(inst.slack().unwrap(), 2.0);
        // lexicographic: {0,1,2}, {0,1,3}, {0,2,3}, {1,2,3}
        assert_eq!(inst.row(1).iter().map(|e| e.0).collect::<Vec<_>>(), vec![0, 1, 3]);
        let big = gen_gap_general_b(8, 2.0).unwrap();
        assert_eq!((big.m(), big.column_sparsity()), (56, 21));
        let pairs = gen_gap_general_b(3, 1.0).unwrap();
        assert_eq!(pairs.m(), 3);
        assert!(gen_gap_general_b(2, 2.0).is_err());
        assert!(matches!(gen_gap_general_b(60, 5.0), Err(Error::TooLarge(_))));
    }

    #[test]
    fn strawman_shape() {
        let (inst, x) = gen_strawman_counterexample(2).unwrap();
        assert_eq!(inst.size(0, 0), 2.0);
        assert_eq!(inst.size(1, 0), 1.0);
        assert_eq!(inst.capacities(), &[2.0]);
        assert_eq!(x.x, vec![0.5, 0.5]);
        let norm = inst.normalize_unit_capacities().instance;
        assert_eq!(norm.size(0, 0), 1.0);
        assert_eq!(norm.size(1, 0), 0.5);
    }

    #[test]
    fn random_generator() {
        let cfg = RandomConfig::new(12, 8, 3, 5);
        let a = gen_random(&cfg).unwrap();
        assert_eq!(a, gen_random(&cfg).unwrap());
        assert_eq!(a.column_sparsity(), 3);
        assert!(a.is_unit_capacity());
        let empty = gen_random(&RandomConfig { density: 0.0, ..cfg }).unwrap();
        assert_eq!(empty.nnz(), 0);
        assert!(gen_random(&RandomConfig::new(3, 2, 3, 0)).is_err());
        let mixed = gen_random(&RandomConfig {
            sizes: SizeProfile::Mixed { big_fraction: 1.0 },
            ..cfg
        })
        .unwrap();
        assert!(mixed.entries().all(|(_, _, s)| s > 0.5 && s <= 1.0));
    }

    #[test]
    fn random_with_slack() {
        let inst = gen_random_with_slack(&RandomConfig::new(10, 6, 2, 1), 3.0).unwrap();
        assert!(inst.is_unit_max_size());
        assert_eq!(inst.slack().unwrap(), 3.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 3), 56);
        assert_eq!(binomial(7, 2), 21);
        assert_eq!(binomial(3, 4), 0);
    }
}
