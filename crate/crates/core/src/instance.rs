//! Column-sparse packing instances, integral and fractional solutions.
//!
//! An instance stores its size matrix column-major (per item, the list of
//! constraints it participates in) together with a row index built once at
//! construction. All algorithms in this crate iterate over `N(i)` (the
//! constraints of item `i`) or over `P(j)` (the items of constraint `j`), so
//! both directions are kept.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack allowed on a constraint of capacity one. Constraints with a
/// larger capacity scale the tolerance proportionally.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("`{field}` has length {found}, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("entry {entry}: item index {item} out of range (n = {n})")]
    ItemOutOfRange { entry: usize, item: usize, n: usize },
    #[error("entry {entry}: constraint index {constraint} out of range (m = {m})")]
    ConstraintOutOfRange {
        entry: usize,
        constraint: usize,
        m: usize,
    },
    #[error("duplicate entry for item {item}, constraint {constraint}")]
    DuplicateEntry { item: usize, constraint: usize },
    #[error("entry for item {item}, constraint {constraint}: size {size} must be positive and finite")]
    InvalidSize {
        item: usize,
        constraint: usize,
        size: f64,
    },
    #[error("item {item}: weight {weight} must be nonnegative and finite")]
    InvalidWeight { item: usize, weight: f64 },
    #[error("constraint {constraint}: capacity {capacity} must be positive and finite")]
    InvalidCapacity { constraint: usize, capacity: f64 },
    #[error("solution has {found} items, instance has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("instance has no stored entries")]
    NoEntries,
    #[error("malformed instance file: {0}")]
    Parse(String),
}

/// A packing instance `max { w·x : Sx ≤ c, 0 ≤ x ≤ u, x integral }` with
/// nonnegative data.
///
/// Items with an upper bound of zero are fixed to zero; this is how
/// [`PipInstance::normalize_unit_capacities`] records items whose size
/// exceeds a capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct PipInstance {
    weights: Vec<f64>,
    capacities: Vec<f64>,
    /// Per item: `(constraint, size)` sorted by constraint.
    columns: Vec<Vec<(usize, f64)>>,
    /// Per constraint: `(item, size)` sorted by item.
    rows: Vec<Vec<(usize, f64)>>,
    upper_bounds: Vec<u32>,
}

/// On-disk JSON layout of an instance. Indices are 0-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub m: usize,
    pub weights: Vec<f64>,
    pub capacities: Vec<f64>,
    pub entries: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_bounds: Option<Vec<u32>>,
}

impl TryFrom<InstanceFile> for PipInstance {
    type Error = InstanceError;

    fn try_from(file: InstanceFile) -> Result<Self, Self::Error> {
        check_len("weights", file.n, file.weights.len())?;
        check_len("capacities", file.m, file.capacities.len())?;
        let inst = PipInstance::new(file.weights, file.capacities, file.entries)?;
        match file.upper_bounds {
            Some(u) => inst.with_upper_bounds(u),
            None => Ok(inst),
        }
    }
}

impl From<PipInstance> for InstanceFile {
    fn from(inst: PipInstance) -> Self {
        let upper_bounds = if inst.has_unit_bounds() {
            None
        } else {
            Some(inst.upper_bounds.clone())
        };
        InstanceFile {
            n: inst.n(),
            m: inst.m(),
            entries: inst.entries().collect(),
            weights: inst.weights,
            capacities: inst.capacities,
            upper_bounds,
        }
    }
}

fn check_len(field: &'static str, expected: usize, found: usize) -> Result<(), InstanceError> {
    if expected == found {
        Ok(())
    } else {
        Err(InstanceError::LengthMismatch {
            field,
            expected,
            found,
        })
    }
}

/// Result of [`PipInstance::normalize_unit_capacities`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitCapacityNormalization {
    pub instance: PipInstance,
    /// Items fixed to zero because some size exceeded its capacity.
    pub dropped: Vec<usize>,
}

impl PipInstance {
    /// Builds an instance from `(item, constraint, size)` triples. All upper
    /// bounds default to one.
    pub fn new(
        weights: Vec<f64>,
        capacities: Vec<f64>,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, InstanceError> {
        let n = weights.len();
        let m = capacities.len();
        for (item, &weight) in weights.iter().enumerate() {
            if !(weight.is_finite() && weight >= 0.0) {
                return Err(InstanceError::InvalidWeight { item, weight });
            }
        }
        for (constraint, &capacity) in capacities.iter().enumerate() {
            if !(capacity.is_finite() && capacity > 0.0) {
                return Err(InstanceError::InvalidCapacity {
                    constraint,
                    capacity,
                });
            }
        }
        let mut columns = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for (entry, (item, constraint, size)) in entries.into_iter().enumerate() {
            if item >= n {
                return Err(InstanceError::ItemOutOfRange { entry, item, n });
            }
            if constraint >= m {
                return Err(InstanceError::ConstraintOutOfRange {
                    entry,
                    constraint,
                    m,
                });
            }
            if !(size.is_finite() && size > 0.0) {
                return Err(InstanceError::InvalidSize {
                    item,
                    constraint,
                    size,
                });
            }
            if !seen.insert((item, constraint)) {
                return Err(InstanceError::DuplicateEntry { item, constraint });
            }
            columns[item].push((constraint, size));
        }
        Ok(Self::from_columns(weights, capacities, columns, vec![1; n]))
    }

    fn from_columns(
        weights: Vec<f64>,
        capacities: Vec<f64>,
        mut columns: Vec<Vec<(usize, f64)>>,
        upper_bounds: Vec<u32>,
    ) -> Self {
        let mut rows = vec![Vec::new(); capacities.len()];
        for (i, col) in columns.iter_mut().enumerate() {
            col.sort_by_key(|&(j, _)| j);
            for &(j, s) in col.iter() {
                rows[j].push((i, s));
            }
        }
        PipInstance {
            weights,
            capacities,
            columns,
            rows,
            upper_bounds,
        }
    }

    /// Replaces the per-item upper bounds. A bound of zero fixes the item to zero.
    pub fn with_upper_bounds(mut self, upper_bounds: Vec<u32>) -> Result<Self, InstanceError> {
        check_len("upper_bounds", self.n(), upper_bounds.len())?;
        self.upper_bounds = upper_bounds;
        Ok(self)
    }

    /// Replaces the capacity vector, keeping sizes and weights.
    pub fn with_capacities(self, capacities: Vec<f64>) -> Result<Self, InstanceError> {
        check_len("capacities", self.m(), capacities.len())?;
        let u = self.upper_bounds.clone();
        let entries: Vec<_> = self.entries().collect();
        PipInstance::new(self.weights, capacities, entries)?.with_upper_bounds(u)
    }

    /// Replaces the weight vector, keeping sizes and capacities.
    pub fn with_weights(self, weights: Vec<f64>) -> Result<Self, InstanceError> {
        check_len("weights", self.n(), weights.len())?;
        let u = self.upper_bounds.clone();
        let entries: Vec<_> = self.entries().collect();
        PipInstance::new(weights, self.capacities, entries)?.with_upper_bounds(u)
    }

    pub fn from_json_str(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn m(&self) -> usize {
        self.capacities.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    pub fn upper_bounds(&self) -> &[u32] {
        &self.upper_bounds
    }

    pub fn has_unit_bounds(&self) -> bool {
        self.upper_bounds.iter().all(|&u| u == 1)
    }

    /// `N(i)`: `(constraint, size)` pairs of item `i`, sorted by constraint.
    pub fn column(&self, item: usize) -> &[(usize, f64)] {
        &self.columns[item]
    }

    /// `P(j)`: `(item, size)` pairs of constraint `j`, sorted by item.
    pub fn row(&self, constraint: usize) -> &[(usize, f64)] {
        &self.rows[constraint]
    }

    /// All stored `(item, constraint, size)` triples in item-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(i, col)| col.iter().map(move |&(j, s)| (i, j, s)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Size of item `i` in constraint `j`, zero when `i` does not participate.
    pub fn size(&self, item: usize, constraint: usize) -> f64 {
        self.columns[item]
            .binary_search_by_key(&constraint, |&(j, _)| j)
            .map(|pos| self.columns[item][pos].1)
            .unwrap_or(0.0)
    }

    /// Column sparsity `k = max_i |N(i)|`; zero for an empty instance.
    pub fn column_sparsity(&self) -> usize {
        self.columns.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Slack `B = min c_j / s_ij` over stored entries.
    pub fn slack(&self) -> Result<f64, InstanceError> {
        self.entries()
            .map(|(_, j, s)| self.capacities[j] / s)
            .min_by(f64::total_cmp)
            .ok_or(InstanceError::NoEntries)
    }

    pub fn is_unit_capacity(&self) -> bool {
        self.capacities.iter().all(|&c| c == 1.0) && self.entries().all(|(_, _, s)| s <= 1.0)
    }

    /// True when every nonempty row has maximum size exactly one.
    pub fn is_unit_max_size(&self) -> bool {
        self.rows.iter().all(|row| {
            row.is_empty() || row.iter().map(|&(_, s)| s).fold(0.0, f64::max) == 1.0
        })
    }

    /// Scales every row to capacity one. Items with a size above the
    /// capacity can never be packed, so they are fixed to zero (upper bound
    /// 0) and their entries removed.
    pub fn normalize_unit_capacities(&self) -> UnitCapacityNormalization {
        let mut dropped = Vec::new();
        let mut upper_bounds = self.upper_bounds.clone();
        let mut columns = Vec::with_capacity(self.n());
        for (i, col) in self.columns.iter().enumerate() {
            let scaled: Vec<(usize, f64)> = col
                .iter()
                .map(|&(j, s)| (j, s / self.capacities[j]))
                .collect();
            if scaled.iter().any(|&(_, s)| s > 1.0) {
                dropped.push(i);
                upper_bounds[i] = 0;
                columns.push(Vec::new());
            } else {
                columns.push(scaled);
            }
        }
        let instance = Self::from_columns(
            self.weights.clone(),
            vec![1.0; self.m()],
            columns,
            upper_bounds,
        );
        UnitCapacityNormalization { instance, dropped }
    }

    /// Scales every nonempty row (sizes and capacity) so that its largest
    /// size is one. Afterwards the slack equals the smallest capacity of a
    /// nonempty row. Empty rows are left untouched.
    pub fn normalize_unit_max_size(&self) -> PipInstance {
        let row_max: Vec<f64> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(_, s)| s).fold(0.0, f64::max))
            .collect();
        let capacities = self
            .capacities
            .iter()
            .zip(&row_max)
            .map(|(&c, &mx)| if mx > 0.0 { c / mx } else { c })
            .collect();
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|&(j, s)| (j, s / row_max[j])).collect())
            .collect();
        Self::from_columns(
            self.weights.clone(),
            capacities,
            columns,
            self.upper_bounds.clone(),
        )
    }

    fn check_dims(&self, sol: &ItemSet) -> Result<(), InstanceError> {
        if sol.len() != self.n() {
            return Err(InstanceError::DimensionMismatch {
                expected: self.n(),
                found: sol.len(),
            });
        }
        Ok(())
    }

    /// Per-constraint load `Σ_i s_ij · mult_i`.
    pub fn loads(&self, sol: &ItemSet) -> Result<Vec<f64>, InstanceError> {
        self.check_dims(sol)?;
        let mut loads = vec![0.0; self.m()];
        for (i, mult) in sol.iter_counts() {
            for &(j, s) in &self.columns[i] {
                loads[j] += s * f64::from(mult);
            }
        }
        Ok(loads)
    }

    /// True iff all bounds hold exactly and every constraint holds within
    /// [`FEASIBILITY_TOL`] (scaled by the capacity when it exceeds one).
    pub fn check_feasible(&self, sol: &ItemSet) -> Result<bool, InstanceError> {
        let loads = self.loads(sol)?;
        let bounds_ok = sol
            .counts()
            .iter()
            .zip(&self.upper_bounds)
            .all(|(&c, &u)| c <= u);
        let rows_ok = loads
            .iter()
            .zip(&self.capacities)
            .all(|(&load, &c)| load <= c + FEASIBILITY_TOL * c.max(1.0));
        Ok(bounds_ok && rows_ok)
    }

    /// `Σ_i w_i · mult_i`.
    pub fn value(&self, sol: &ItemSet) -> Result<f64, InstanceError> {
        self.check_dims(sol)?;
        Ok(sol
            .iter_counts()
            .map(|(i, mult)| self.weights[i] * f64::from(mult))
            .sum())
    }

    /// Instance with the same matrix and weights but all upper bounds one
    /// (items fixed to zero stay fixed).
    pub fn with_unit_bounds(&self) -> PipInstance {
        let mut out = self.clone();
        for u in &mut out.upper_bounds {
            *u = (*u).min(1);
        }
        out
    }
}

/// An integral solution: per-item multiplicity, a plain subset when all
/// upper bounds are one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemSet {
    counts: Vec<u32>,
}

impl ItemSet {
    pub fn empty(n: usize) -> Self {
        ItemSet { counts: vec![0; n] }
    }

    pub fn full(n: usize) -> Self {
        ItemSet { counts: vec![1; n] }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        ItemSet { counts }
    }

    /// # Panics
    /// If an index is `>= n`.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for i in indices {
            set.counts[i] = 1;
        }
        set
    }

    pub fn from_bools(members: &[bool]) -> Self {
        ItemSet {
            counts: members.iter().map(|&b| u32::from(b)).collect(),
        }
    }

    /// Subset encoded by the low `n` bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        ItemSet {
            counts: (0..n).map(|i| ((mask >> i) & 1) as u32).collect(),
        }
    }

    /// Ground-set size.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Number of distinct items present.
    pub fn cardinality(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.counts[item] > 0
    }

    pub fn count(&self, item: usize) -> u32 {
        self.counts[item]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn insert(&mut self, item: usize) {
        self.counts[item] = self.counts[item].max(1);
    }

    pub fn remove(&mut self, item: usize) {
        self.counts[item] = 0;
    }

    pub fn set_count(&mut self, item: usize, count: u32) {
        self.counts[item] = count;
    }

    /// Indices of present items, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i)
    }

    /// `(index, multiplicity)` for present items.
    pub fn iter_counts(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i, c))
    }

    pub fn is_subset_of(&self, other: &ItemSet) -> bool {
        self.counts.len() == other.counts.len()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.counts.iter().map(|&c| c > 0).collect()
    }

    /// Bitmask of present items. Requires `len() <= 64`.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.len() <= 64);
        self.indices().fold(0, |acc, i| acc | (1 << i))
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, (i, c)) in self.iter_counts().enumerate() {
            if pos > 0 {
                write!(f, ", ")?;
            }
            if c == 1 {
                write!(f, "{i}")?;
            } else {
                write!(f, "{i}x{c}")?;
            }
        }
        write!(f, "}}")
    }
}

/// A fractional point `x` together with its objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

impl FractionalSolution {
    pub fn new(x: Vec<f64>, objective: f64) -> Self {
        FractionalSolution { x, objective }
    }

    /// Solution with the additive objective `w·x` filled in.
    pub fn with_weights(x: Vec<f64>, weights: &[f64]) -> Self {
        let objective = x.iter().zip(weights).map(|(a, b)| a * b).sum();
        FractionalSolution { x, objective }
    }

    pub fn zeros(n: usize) -> Self {
        FractionalSolution {
            x: vec![0.0; n],
            objective: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagonal(n: usize) -> PipInstance {
        PipInstance::new(vec![1.0; n], vec![1.0; n], (0..n).map(|i| (i, i, 1.0))).unwrap()
    }

    #[test]
    fn column_sparsity_examples() {
        assert_eq!(diagonal(3).column_sparsity(), 1);
        let empty = PipInstance::new(vec![], vec![], []).unwrap();
        assert_eq!(empty.column_sparsity(), 0);
        let two = PipInstance::new(
            vec![1.0; 3],
            vec![1.0; 3],
            [
                (0, 0, 1.0),
                (0, 1, 0.001),
                (1, 1, 1.0),
                (1, 2, 0.001),
                (2, 2, 1.0),
                (2, 0, 0.001),
            ],
        )
        .unwrap();
        assert_eq!(two.column_sparsity(), 2);
    }

    #[test]
    fn slack_examples() {
        assert_eq!(diagonal(2).slack().unwrap(), 1.0);
        let inst = PipInstance::new(vec![1.0, 1.0], vec![1.0, 2.0], [(0, 0, 0.25), (1, 1, 1.0)])
            .unwrap();
        assert_eq!(inst.slack().unwrap(), 2.0);
        let empty = PipInstance::new(vec![1.0], vec![1.0], []).unwrap();
        assert_eq!(empty.slack(), Err(InstanceError::NoEntries));
    }

    #[test]
    fn rejects_bad_input() {
        let dup = PipInstance::new(vec![1.0], vec![1.0], [(0, 0, 0.5), (0, 0, 0.2)]);
        assert_eq!(
            dup,
            Err(InstanceError::DuplicateEntry {
                item: 0,
                constraint: 0
            })
        );
        assert!(matches!(
            PipInstance::new(vec![1.0], vec![1.0], [(0, 0, -0.5)]),
            Err(InstanceError::InvalidSize { .. })
        ));
        assert!(matches!(
            PipInstance::new(vec![1.0], vec![0.0], []),
            Err(InstanceError::InvalidCapacity { .. })
        ));
        assert!(matches!(
            PipInstance::new(vec![-1.0], vec![], []),
            Err(InstanceError::InvalidWeight { .. })
        ));
        assert!(matches!(
            PipInstance::new(vec![1.0], vec![1.0], [(0, 3, 0.5)]),
            Err(InstanceError::ConstraintOutOfRange { entry: 0, .. })
        ));
        assert!(matches!(
            PipInstance::new(vec![1.0], vec![1.0], [(2, 0, 0.5)]),
            Err(InstanceError::ItemOutOfRange { entry: 0, .. })
        ));
    }

    #[test]
    fn unit_capacity_normalization() {
        let inst = PipInstance::new(vec![1.0], vec![2.0], [(0, 0, 1.0)]).unwrap();
        let norm = inst.normalize_unit_capacities();
        assert_eq!(norm.instance.capacities(), &[1.0]);
        assert_eq!(norm.instance.size(0, 0), 0.5);
        assert!(norm.dropped.is_empty());

        let big = PipInstance::new(vec![1.0], vec![1.0], [(0, 0, 1.5)]).unwrap();
        let norm = big.normalize_unit_capacities();
        assert_eq!(norm.dropped, vec![0]);
        assert_eq!(norm.instance.upper_bounds(), &[0]);
        assert!(!norm
            .instance
            .check_feasible(&ItemSet::from_indices(1, [0]))
            .unwrap());

        let already = diagonal(3);
        assert_eq!(already.normalize_unit_capacities().instance, already);
    }

    #[test]
    fn unit_max_size_normalization() {
        let inst = PipInstance::new(vec![1.0, 1.0], vec![1.0], [(0, 0, 0.5), (1, 0, 0.25)]).unwrap();
        let norm = inst.normalize_unit_max_size();
        assert_eq!(norm.size(0, 0), 1.0);
        assert_eq!(norm.size(1, 0), 0.5);
        assert_eq!(norm.capacities(), &[2.0]);
        assert_eq!(norm.slack().unwrap(), 2.0);
        assert_eq!(norm.normalize_unit_max_size(), norm);
        assert_eq!(diagonal(2).normalize_unit_max_size(), diagonal(2));
    }

    #[test]
    fn feasibility_and_value() {
        let inst = PipInstance::new(vec![2.0, 5.0], vec![1.0], [(0, 0, 0.6), (1, 0, 0.6)]).unwrap();
        assert!(inst.check_feasible(&ItemSet::empty(2)).unwrap());
        assert!(!inst.check_feasible(&ItemSet::full(2)).unwrap());
        assert_eq!(inst.value(&ItemSet::empty(2)).unwrap(), 0.0);
        assert_eq!(inst.value(&ItemSet::from_indices(2, [1])).unwrap(), 5.0);
        assert_eq!(
            inst.value(&ItemSet::empty(3)),
            Err(InstanceError::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
        let unit = diagonal(3);
        assert_eq!(unit.value(&ItemSet::full(3)).unwrap(), 3.0);
    }

    #[test]
    fn bounds_are_exact() {
        let inst = PipInstance::new(vec![1.0], vec![1.0], [(0, 0, 0.25)])
            .unwrap()
            .with_upper_bounds(vec![3])
            .unwrap();
        assert!(inst.check_feasible(&ItemSet::from_counts(vec![3])).unwrap());
        assert!(!inst.check_feasible(&ItemSet::from_counts(vec![4])).unwrap());
    }

    #[test]
    fn empty_support_items_are_free() {
        let inst = PipInstance::new(vec![1.0, 1.0], vec![1.0], [(0, 0, 1.0)]).unwrap();
        assert!(inst.column(1).is_empty());
        assert!(inst.check_feasible(&ItemSet::full(2)).unwrap());
    }

    #[test]
    fn json_round_trip_and_diagnostics() {
        let inst = PipInstance::new(vec![1.0, 2.0], vec![1.0], [(0, 0, 0.5), (1, 0, 0.25)])
            .unwrap()
            .with_upper_bounds(vec![1, 2])
            .unwrap();
        let text = inst.to_json_string();
        assert_eq!(PipInstance::from_json_str(&text).unwrap(), inst);

        let err = PipInstance::from_json_str(
            r#"{"n":1,"m":1,"weights":[1],"capacities":[1],"entries":[[0,1,0.5]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("constraint index 1"), "{err}");
        let err = PipInstance::from_json_str(r#"{"n":2,"m":1,"weights":[1],"capacities":[1],"entries":[]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("weights"), "{err}");
        let err = PipInstance::from_json_str("{\n\"n\": oops}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
