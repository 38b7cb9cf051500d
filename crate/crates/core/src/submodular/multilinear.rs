use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ValueOracle;
use crate::error::{invalid, Error, Result};
use crate::rng::trial_rng;

/// Largest `n` for which [`multilinear_exact`] enumerates all subsets.
pub const EXACT_MAX_N: usize = 25;

/// Largest `n` for which a full [`ValueTable`] is built.
pub const TABLE_MAX_N: usize = 20;

const CHUNK: u64 = 2048;

pub(crate) fn validate_point(n: usize, x: &[f64]) -> Result<()> {
    if x.len() != n {
        return Err(invalid(format!("x has {} entries, oracle has {n} items", x.len())));
    }
    if let Some(i) = x.iter().position(|v| !(0.0..=1.0).contains(v)) {
        return Err(invalid(format!("x[{i}] = {} outside [0, 1]", x[i])));
    }
    Ok(())
}

/// `F(x) = Σ_T Π_{i∈T} x_i Π_{j∉T} (1 − x_j) f(T)`, by depth-first
/// enumeration that skips zero-probability branches.
pub fn multilinear_exact(f: &impl ValueOracle, x: &[f64]) -> Result<f64> {
    let n = f.n();
    validate_point(n, x)?;
    let free = x.iter().filter(|&&v| v > 0.0 && v < 1.0).count();
    if free > EXACT_MAX_N {
        return Err(Error::TooLarge(format!(
            "exact multilinear extension needs at most {EXACT_MAX_N} fractional coordinates, got {free}"
        )));
    }
    let mut members = vec![false; n];
    Ok(walk(f, x, 0, 1.0, &mut members))
}

fn walk(f: &impl ValueOracle, x: &[f64], i: usize, prob: f64, members: &mut [bool]) -> f64 {
    if i == x.len() {
        return prob * f.value(members);
    }
    let mut total = 0.0;
    if x[i] < 1.0 {
        members[i] = false;
        total += walk(f, x, i + 1, prob * (1.0 - x[i]), members);
    }
    if x[i] > 0.0 {
        members[i] = true;
        total += walk(f, x, i + 1, prob * x[i], members);
        members[i] = false;
    }
    total
}

/// All `2^n` values of `f`, for repeated exact evaluation of `F` and its
/// gradient.
#[derive(Debug, Clone)]
pub struct ValueTable {
    n: usize,
    values: Vec<f64>,
}

impl ValueTable {
    pub fn new(f: &impl ValueOracle) -> Result<Self> {
        let n = f.n();
        if n > TABLE_MAX_N {
            return Err(Error::TooLarge(format!("value table needs n <= {TABLE_MAX_N}, got {n}")));
        }
        let values = (0..1u64 << n).into_par_iter().map(|m| f.value_of_mask(m)).collect();
        Ok(ValueTable { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }

    /// Largest `f(T)` over feasible `T`, with its mask.
    pub fn best_where(&self, feasible: impl Fn(u64) -> bool) -> Option<(u64, f64)> {
        (0..1u64 << self.n)
            .filter(|&m| feasible(m))
            .map(|m| (m, self.get(m)))
            .fold(None, |best, (m, v)| match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((m, v)),
            })
    }

    /// `p(T) = Π_{i∈T} x_i Π_{j∉T} (1 − x_j)` for every mask.
    pub fn product_probabilities(&self, x: &[f64]) -> Result<Vec<f64>> {
        validate_point(self.n, x)?;
        let mut probs = vec![0.0; 1 << self.n];
        probs[0] = 1.0;
        for (i, &xi) in x.iter().enumerate() {
            let bit = 1usize << i;
            for mask in 0..bit {
                let p = probs[mask];
                probs[mask | bit] = p * xi;
                probs[mask] = p * (1.0 - xi);
            }
        }
        Ok(probs)
    }

    pub fn multilinear(&self, x: &[f64]) -> Result<f64> {
        let probs = self.product_probabilities(x)?;
        Ok(probs.iter().zip(&self.values).map(|(p, v)| p * v).sum())
    }

    /// `E[f(S ∪ {i}) − f(S)]` for `S ~ x` and every `i`; equals
    /// `(1 − x_i) ∂F/∂x_i`.
    pub fn marginal_gains(&self, x: &[f64]) -> Result<Vec<f64>> {
        let probs = self.product_probabilities(x)?;
        Ok(self.per_item(|lo, hi| probs[lo] * (self.values[hi] - self.values[lo])))
    }

    /// `∂F/∂x_i = E[f(S ∪ {i}) − f(S ∖ {i})]` for every `i`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let probs = self.product_probabilities(x)?;
        Ok(self.per_item(|lo, hi| (probs[lo] + probs[hi]) * (self.values[hi] - self.values[lo])))
    }

    /// `Σ term(m, m | 2^i)` over masks `m` without bit `i`, for every `i`.
    fn per_item(&self, term: impl Fn(usize, usize) -> f64 + Sync) -> Vec<f64> {
        let size = 1usize << self.n;
        (0..self.n)
            .into_par_iter()
            .map(|i| {
                let bit = 1usize << i;
                let mut total = 0.0;
                for base in (0..size).step_by(2 * bit) {
                    for lo in base..base + bit {
                        total += term(lo, lo | bit);
                    }
                }
                total
            })
            .collect()
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub se: f64,
    pub samples: u64,
}

/// Running mean and sum of squared deviations; merging is exact for equal
/// inputs, so constant samples report zero variance.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        let delta = v - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (v - self.mean);
    }

    pub fn merge(&mut self, other: Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other;
            return;
        }
        let total = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / total;
        self.count += other.count;
    }

    pub fn estimate(&self) -> MeanEstimate {
        let n = self.count as f64;
        let var = if self.count > 1 { self.m2 / (n - 1.0) } else { 0.0 };
        MeanEstimate {
            mean: self.mean,
            se: (var / n).sqrt(),
            samples: self.count,
        }
    }
}

/// Joint moments of two paired samples, for the standard error of
/// `mean(a − c·b)`.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct PairMoments {
    pub a: Moments,
    pub b: Moments,
    /// Sum of `(a − mean_a)(b − mean_b)`.
    pub co: f64,
}

impl PairMoments {
    pub fn push(&mut self, a: f64, b: f64) {
        let da = a - self.a.mean;
        self.a.push(a);
        self.b.push(b);
        self.co += da * (b - self.b.mean);
    }

    pub fn merge(&mut self, other: PairMoments) {
        let (na, nb) = (self.a.count as f64, other.a.count as f64);
        if na + nb > 0.0 {
            let cross = (other.a.mean - self.a.mean) * (other.b.mean - self.b.mean) * na * nb / (na + nb);
            self.co += other.co + cross;
        }
        self.a.merge(other.a);
        self.b.merge(other.b);
    }

    /// Standard error of the sample mean of `a − c·b`.
    pub fn difference_se(&self, c: f64) -> f64 {
        let n = self.a.count as f64;
        if self.a.count < 2 {
            return 0.0;
        }
        let m2 = (self.a.m2 + c * c * self.b.m2 - 2.0 * c * self.co).max(0.0);
        (m2 / (n - 1.0) / n).sqrt()
    }
}

/// Runs `trial(rng)` once per trial on stream `t` of `seed` and averages
/// each of the `K` outputs. Chunks are merged in order, so the result does
/// not depend on scheduling.
pub(crate) fn parallel_moments<const K: usize>(
    trials: u64,
    seed: u64,
    trial: impl Fn(&mut ChaCha8Rng) -> [f64; K] + Sync,
) -> [Moments; K] {
    let chunks: Vec<[Moments; K]> = (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = [Moments::default(); K];
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let out = trial(&mut trial_rng(seed, t));
                for (m, v) in acc.iter_mut().zip(out) {
                    m.push(v);
                }
            }
            acc
        })
        .collect();
    let mut total = [Moments::default(); K];
    for chunk in chunks {
        for (t, c) in total.iter_mut().zip(chunk) {
            t.merge(c);
        }
    }
    total
}

/// Draws `members[i] = (u_i < probs[i])`, one uniform per item.
pub(crate) fn sample_members(probs: &[f64], rng: &mut impl Rng, members: &mut [bool]) {
    for (m, &p) in members.iter_mut().zip(probs) {
        *m = rng.gen::<f64>() < p;
    }
}

/// Unbiased Monte Carlo estimate of `F(x)` from `samples` independent draws.
pub fn multilinear_estimate(f: &impl ValueOracle, x: &[f64], samples: u64, seed: u64) -> Result<MeanEstimate> {
    validate_point(f.n(), x)?;
    if samples == 0 {
        return Err(invalid("samples must be at least one"));
    }
    let [m] = parallel_moments(samples, seed, |rng| {
        let mut members = vec![false; x.len()];
        sample_members(x, rng, &mut members);
        [f.value(&members)]
    });
    Ok(m.estimate())
}
