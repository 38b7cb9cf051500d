use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::trial_rng;

/// Value-oracle access to a set function `f: 2^[n] → ℝ₊`.
///
/// Implementations must be pure: samplers call them concurrently.
pub trait ValueOracle: Sync {
    fn n(&self) -> usize;

    fn value(&self, members: &[bool]) -> f64;

    /// `f` of the set encoded by the low `n` bits of `mask`.
    fn value_of_mask(&self, mask: u64) -> f64 {
        let members: Vec<bool> = (0..self.n()).map(|i| (mask >> i) & 1 == 1).collect();
        self.value(&members)
    }
}

/// Serialized form of an oracle; see [`SubmodularOracle`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleSpec {
    Linear {
        weights: Vec<f64>,
    },
    Coverage {
        universe_weights: Vec<f64>,
        covers: Vec<Vec<usize>>,
    },
    /// `f(T) = g(|T|)` with `g` tabulated on `0..=n`.
    ConcaveCardinality {
        g: Vec<f64>,
    },
}

/// A validated monotone submodular function from one of three families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OracleSpec", into = "OracleSpec")]
pub struct SubmodularOracle {
    spec: OracleSpec,
    /// Coverage only: per-item bitset over the universe.
    cover_bits: Vec<Vec<u64>>,
}

impl TryFrom<OracleSpec> for SubmodularOracle {
    type Error = Error;

    fn try_from(spec: OracleSpec) -> Result<Self> {
        let mut cover_bits = Vec::new();
        match &spec {
            OracleSpec::Linear { weights } => {
                if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
                    return Err(invalid(format!("linear weight {i} is {}", weights[i])));
                }
            }
            OracleSpec::Coverage {
                universe_weights,
                covers,
            } => {
                if let Some(e) = universe_weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
                    return Err(invalid(format!("universe weight {e} is {}", universe_weights[e])));
                }
                let words = universe_weights.len().div_ceil(64);
                for (i, cover) in covers.iter().enumerate() {
                    let mut bits = vec![0u64; words];
                    for &e in cover {
                        if e >= universe_weights.len() {
                            return Err(invalid(format!(
                                "item {i} covers element {e}, universe has {}",
                                universe_weights.len()
                            )));
                        }
                        bits[e / 64] |= 1 << (e % 64);
                    }
                    cover_bits.push(bits);
                }
            }
            OracleSpec::ConcaveCardinality { g } => {
                if g.is_empty() {
                    return Err(invalid("g must list g(0), ..., g(n)"));
                }
                if let Some(t) = g.iter().position(|v| !v.is_finite()) {
                    return Err(invalid(format!("g({t}) is not finite")));
                }
                if g[0] != 0.0 {
                    return Err(invalid(format!("g(0) must be 0, got {}", g[0])));
                }
                for t in 1..g.len() {
                    if g[t] < g[t - 1] {
                        return Err(invalid(format!("g decreases at {t}")));
                    }
                    if t + 1 < g.len() && g[t + 1] - 2.0 * g[t] + g[t - 1] > 1e-12 * g[t].abs().max(1.0) {
                        return Err(invalid(format!("g is not concave at {t}")));
                    }
                }
            }
        }
        Ok(SubmodularOracle { spec, cover_bits })
    }
}

impl From<SubmodularOracle> for OracleSpec {
    fn from(oracle: SubmodularOracle) -> Self {
        oracle.spec
    }
}

impl SubmodularOracle {
    pub fn linear(weights: Vec<f64>) -> Result<Self> {
        OracleSpec::Linear { weights }.try_into()
    }

    pub fn coverage(universe_weights: Vec<f64>, covers: Vec<Vec<usize>>) -> Result<Self> {
        OracleSpec::Coverage {
            universe_weights,
            covers,
        }
        .try_into()
    }

    pub fn concave_cardinality(g: Vec<f64>) -> Result<Self> {
        OracleSpec::ConcaveCardinality { g }.try_into()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("oracle file: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("oracle serialization cannot fail")
    }

    pub fn spec(&self) -> &OracleSpec {
        &self.spec
    }

    pub fn family(&self) -> &'static str {
        match self.spec {
            OracleSpec::Linear { .. } => "linear",
            OracleSpec::Coverage { .. } => "coverage",
            OracleSpec::ConcaveCardinality { .. } => "concave_cardinality",
        }
    }

    /// Coverage function with `n` items over `universe` elements weighted
    /// uniformly in `[0.1, 1]`; each item covers each element with
    /// probability `density`.
    pub fn random_coverage(n: usize, universe: usize, density: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(invalid(format!("density {density} outside [0, 1]")));
        }
        let mut rng = trial_rng(seed, 0);
        let universe_weights = (0..universe).map(|_| rng.gen_range(0.1..=1.0)).collect();
        let covers = (0..n)
            .map(|_| (0..universe).filter(|_| rng.gen::<f64>() < density).collect())
            .collect();
        Self::coverage(universe_weights, covers)
    }
}

impl ValueOracle for SubmodularOracle {
    fn n(&self) -> usize {
        match &self.spec {
            OracleSpec::Linear { weights } => weights.len(),
            OracleSpec::Coverage { covers, .. } => covers.len(),
            OracleSpec::ConcaveCardinality { g } => g.len() - 1,
        }
    }

    fn value(&self, members: &[bool]) -> f64 {
        match &self.spec {
            OracleSpec::Linear { weights } => weights
                .iter()
                .zip(members)
                .filter(|(_, &m)| m)
                .map(|(w, _)| w)
                .sum(),
            OracleSpec::Coverage { universe_weights, .. } => {
                let words = universe_weights.len().div_ceil(64);
                let mut covered = vec![0u64; words];
                for (bits, _) in self.cover_bits.iter().zip(members).filter(|(_, &m)| m) {
                    for (c, b) in covered.iter_mut().zip(bits) {
                        *c |= b;
                    }
                }
                let mut total = 0.0;
                for (w, word) in covered.iter().enumerate() {
                    let mut rest = *word;
                    while rest != 0 {
                        total += universe_weights[w * 64 + rest.trailing_zeros() as usize];
                        rest &= rest - 1;
                    }
                }
                total
            }
            OracleSpec::ConcaveCardinality { g } => g[members.iter().filter(|&&m| m).count()],
        }
    }
}

/// Outcome of an exhaustive monotonicity and submodularity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OracleCheck {
    Holds,
    NegativeEmpty { value: f64 },
    /// `f(set ∪ {item}) < f(set)`.
    NotMonotone { set: u64, item: usize },
    /// The marginal of `item` grows when `other` is added to `set`.
    NotSubmodular { set: u64, other: usize, item: usize },
}

/// Largest `n` accepted by [`check_monotone_submodular`].
pub const ORACLE_CHECK_MAX_N: usize = 12;

/// Checks `f(∅) ≥ 0`, nonnegative marginals and diminishing marginals over
/// every subset. Diminishing returns for single added elements implies it for
/// all `A ⊆ B`.
pub fn check_monotone_submodular(f: &impl ValueOracle, tol: f64) -> Result<OracleCheck> {
    let n = f.n();
    if n > ORACLE_CHECK_MAX_N {
        return Err(Error::TooLarge(format!(
            "exhaustive oracle check needs n <= {ORACLE_CHECK_MAX_N}, got {n}"
        )));
    }
    let table: Vec<f64> = (0..1u64 << n).map(|m| f.value_of_mask(m)).collect();
    if table[0] < -tol {
        return Ok(OracleCheck::NegativeEmpty { value: table[0] });
    }
    for set in 0..1u64 << n {
        for item in (0..n).filter(|&i| set >> i & 1 == 0) {
            let gain = table[(set | 1 << item) as usize] - table[set as usize];
            if gain < -tol {
                return Ok(OracleCheck::NotMonotone { set, item });
            }
            for other in (0..n).filter(|&o| o != item && set >> o & 1 == 0) {
                let bigger = set | 1 << other;
                let later = table[(bigger | 1 << item) as usize] - table[bigger as usize];
                if later > gain + tol {
                    return Ok(OracleCheck::NotSubmodular { set, other, item });
                }
            }
        }
    }
    Ok(OracleCheck::Holds)
}
