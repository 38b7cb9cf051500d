//! Deterministic alteration rules that delete items from a sampled set until
//! every constraint holds.
//!
//! All thresholds are relative to the constraint's capacity, so on a
//! unit-capacity instance "big" means size above one half and "overflow"
//! means total size above one.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::instance::{ItemSet, PipInstance};

/// Relative slack on overflow tests; keeps float summation noise from
/// marking items whose sizes sum to exactly the capacity.
const OVERFLOW_TOL: f64 = 1e-12;

fn overflows(load: f64, capacity: f64) -> bool {
    load > capacity * (1.0 + OVERFLOW_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlterationRule {
    /// Keep the sampled set unchanged. Feasibility is not guaranteed.
    Identity,
    /// Delete `i` if some other sampled item is big for a constraint of `i`,
    /// or the small sampled items of that constraint overflow it.
    Simple,
    /// Delete `i` if, in some constraint of `i`, the sampled items at least
    /// as large as `i` overflow the capacity.
    Sorted,
    /// As `Sorted`, on sizes rounded up to the next power of two.
    PowersOfTwo,
    /// Delete every sampled item of every violated constraint.
    Strawman,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CauseKind {
    OtherBigItem,
    SmallOverflow,
    LargerItemsOverflow,
    PowerOfTwoOverflow,
    ConstraintViolated,
}

/// Why an item was deleted: constraint `constraint` triggered rule `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeletionCause {
    pub item: usize,
    pub constraint: usize,
    pub kind: CauseKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alteration {
    pub survivors: ItemSet,
    pub causes: Vec<DeletionCause>,
}

/// Smallest power of two `2^-a` (a ≥ 0) that is at least `size`.
pub fn round_up_power_of_two(size: f64) -> Result<f64> {
    if !(size > 0.0 && size <= 1.0) {
        return Err(invalid(format!("size {size} outside (0, 1]")));
    }
    let mut t = 1.0;
    while t / 2.0 >= size {
        t /= 2.0;
    }
    Ok(t)
}

/// A rule bound to an instance, with per-row orderings precomputed so that
/// repeated application in Monte Carlo loops does no sorting.
#[derive(Debug, Clone)]
pub struct PreparedAlteration<'a> {
    inst: &'a PipInstance,
    rule: AlterationRule,
    /// Per constraint: `(item, effective size)`, descending by size for the
    /// threshold rules.
    rows: Vec<Vec<(usize, f64)>>,
}

impl<'a> PreparedAlteration<'a> {
    pub fn new(inst: &'a PipInstance, rule: AlterationRule) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = (0..inst.m()).map(|j| inst.row(j).to_vec()).collect();
        if rule == AlterationRule::PowersOfTwo {
            for row in &mut rows {
                for entry in row.iter_mut() {
                    entry.1 = round_up_power_of_two(entry.1)?;
                }
            }
        }
        if matches!(rule, AlterationRule::Sorted | AlterationRule::PowersOfTwo) {
            for row in &mut rows {
                row.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            }
        }
        Ok(PreparedAlteration { inst, rule, rows })
    }

    pub fn rule(&self) -> AlterationRule {
        self.rule
    }

    pub fn instance(&self) -> &'a PipInstance {
        self.inst
    }

    /// Sets `marked[i]` for every sampled item the rule deletes. `marked`
    /// must be all-false on entry.
    pub fn mark(&self, sampled: &[bool], marked: &mut [bool], mut causes: Option<&mut Vec<DeletionCause>>) {
        let mut record = |item: usize, constraint: usize, kind: CauseKind, marked: &mut [bool]| {
            marked[item] = true;
            if let Some(c) = causes.as_deref_mut() {
                c.push(DeletionCause {
                    item,
                    constraint,
                    kind,
                });
            }
        };
        let caps = self.inst.capacities();
        match self.rule {
            AlterationRule::Identity => {}
            AlterationRule::Simple => {
                for (j, row) in self.rows.iter().enumerate() {
                    let half = caps[j] / 2.0;
                    let mut bigs = 0usize;
                    let mut small_load = 0.0;
                    for &(i, s) in row {
                        if sampled[i] {
                            if s > half {
                                bigs += 1;
                            } else {
                                small_load += s;
                            }
                        }
                    }
                    let small_over = overflows(small_load, caps[j]);
                    if bigs == 0 && !small_over {
                        continue;
                    }
                    for &(i, s) in row {
                        if !sampled[i] {
                            continue;
                        }
                        let other_bigs = bigs - usize::from(s > half);
                        if other_bigs > 0 {
                            record(i, j, CauseKind::OtherBigItem, marked);
                        }
                        if small_over {
                            record(i, j, CauseKind::SmallOverflow, marked);
                        }
                    }
                }
            }
            AlterationRule::Sorted | AlterationRule::PowersOfTwo => {
                let kind = if self.rule == AlterationRule::Sorted {
                    CauseKind::LargerItemsOverflow
                } else {
                    CauseKind::PowerOfTwoOverflow
                };
                for (j, row) in self.rows.iter().enumerate() {
                    let mut prefix = 0.0;
                    let mut start = 0;
                    while start < row.len() {
                        let size = row[start].1;
                        let mut end = start;
                        while end < row.len() && row[end].1 == size {
                            if sampled[row[end].0] {
                                prefix += size;
                            }
                            end += 1;
                        }
                        if overflows(prefix, caps[j]) {
                            for &(i, _) in &row[start..end] {
                                if sampled[i] {
                                    record(i, j, kind, marked);
                                }
                            }
                        }
                        start = end;
                    }
                }
            }
            AlterationRule::Strawman => {
                for (j, row) in self.rows.iter().enumerate() {
                    let load: f64 = row.iter().filter(|&&(i, _)| sampled[i]).map(|&(_, s)| s).sum();
                    if overflows(load, caps[j]) {
                        for &(i, _) in row {
                            if sampled[i] {
                                record(i, j, CauseKind::ConstraintViolated, marked);
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn alter(&self, sampled: &ItemSet) -> Alteration {
        let present = sampled.to_bools();
        let mut marked = vec![false; present.len()];
        let mut causes = Vec::new();
        self.mark(&present, &mut marked, Some(&mut causes));
        let survivors = ItemSet::from_bools(
            &present
                .iter()
                .zip(&marked)
                .map(|(&p, &d)| p && !d)
                .collect::<Vec<_>>(),
        );
        Alteration { survivors, causes }
    }

    /// Survivor mask for the subset encoded by `mask` (n ≤ 64).
    pub fn survivors_of_mask(&self, mask: u64) -> u64 {
        let n = self.inst.n();
        let present: Vec<bool> = (0..n).map(|i| (mask >> i) & 1 == 1).collect();
        let mut marked = vec![false; n];
        self.mark(&present, &mut marked, None);
        (0..n)
            .filter(|&i| present[i] && !marked[i])
            .fold(0, |acc, i| acc | (1 << i))
    }
}

pub fn alter_simple(inst: &PipInstance, sampled: &ItemSet) -> ItemSet {
    PreparedAlteration::new(inst, AlterationRule::Simple)
        .expect("simple rule has no preparation errors")
        .alter(sampled)
        .survivors
}

pub fn alter_sorted(inst: &PipInstance, sampled: &ItemSet) -> ItemSet {
    PreparedAlteration::new(inst, AlterationRule::Sorted)
        .expect("sorted rule has no preparation errors")
        .alter(sampled)
        .survivors
}

/// Fails when a size exceeds one (instance not normalized to unit maximum size).
pub fn alter_powers_of_two(inst: &PipInstance, sampled: &ItemSet) -> Result<ItemSet> {
    Ok(PreparedAlteration::new(inst, AlterationRule::PowersOfTwo)?
        .alter(sampled)
        .survivors)
}

/// Result of an exhaustive survival-monotonicity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonotonicityCheck {
    Holds,
    /// `item` survives when the sample is `larger` but not when it is the
    /// subset `smaller`.
    Violated { smaller: u64, larger: u64, item: usize },
}

/// Checks that for all `T1 ⊆ T2` and `i ∈ T1`, surviving `alter(T2)` implies
/// surviving `alter(T1)`. Enumerates all `3^n` pairs; `n ≤ 16`.
pub fn check_survival_monotone(survivors: impl Fn(u64) -> u64, n: usize) -> Result<MonotonicityCheck> {
    if n > 16 {
        return Err(crate::Error::TooLarge(format!(
            "monotonicity enumeration needs n <= 16, got {n}"
        )));
    }
    let table: Vec<u64> = (0..1u64 << n).map(&survivors).collect();
    for larger in 0..1u64 << n {
        let kept = table[larger as usize];
        let mut smaller = larger;
        loop {
            let lost = kept & smaller & !table[smaller as usize];
            if lost != 0 {
                return Ok(MonotonicityCheck::Violated {
                    smaller,
                    larger,
                    item: lost.trailing_zeros() as usize,
                });
            }
            if smaller == 0 {
                break;
            }
            smaller = (smaller - 1) & larger;
        }
    }
    Ok(MonotonicityCheck::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_row(sizes: &[f64], cap: f64) -> PipInstance {
        PipInstance::new(
            vec![1.0; sizes.len()],
            vec![cap],
            sizes.iter().enumerate().map(|(i, &s)| (i, 0, s)),
        )
        .unwrap()
    }

    fn all(n: usize) -> ItemSet {
        ItemSet::full(n)
    }

    #[test]
    fn simple_rule_traces() {
        let inst = one_row(&[0.6, 0.3], 1.0);
        assert_eq!(alter_simple(&inst, &all(2)), ItemSet::from_indices(2, [0]));
        let inst = one_row(&[0.4, 0.4, 0.4], 1.0);
        assert_eq!(alter_simple(&inst, &all(3)), ItemSet::empty(3));
        let inst = one_row(&[0.6, 0.7], 1.0);
        assert_eq!(alter_simple(&inst, &all(2)), ItemSet::empty(2));
    }

    #[test]
    fn simple_rule_records_both_causes() {
        let inst = one_row(&[0.6, 0.7, 0.5, 0.5, 0.1], 1.0);
        let alt = PreparedAlteration::new(&inst, AlterationRule::Simple)
            .unwrap()
            .alter(&all(5));
        assert!(alt.survivors.is_empty());
        let kinds_of = |i| alt.causes.iter().filter(move |c| c.item == i).map(|c| c.kind).collect::<Vec<_>>();
        assert_eq!(kinds_of(0), vec![CauseKind::OtherBigItem, CauseKind::SmallOverflow]);
        assert_eq!(kinds_of(4), vec![CauseKind::OtherBigItem, CauseKind::SmallOverflow]);
    }

    #[test]
    fn sorted_rule_traces() {
        let inst = one_row(&[0.6, 0.3, 0.2], 1.0);
        assert_eq!(alter_sorted(&inst, &all(3)), ItemSet::from_indices(3, [0, 1]));
        let inst = one_row(&[0.5, 0.5, 0.5], 1.0);
        assert_eq!(alter_sorted(&inst, &all(3)), ItemSet::empty(3));
        let inst = one_row(&[1.0, 0.9], 1.0);
        let single = ItemSet::from_indices(2, [0]);
        assert_eq!(alter_sorted(&inst, &single), single);
    }

    #[test]
    fn sorted_rule_exact_capacity_is_kept() {
        let inst = one_row(&[0.5, 0.5], 1.0);
        assert_eq!(alter_sorted(&inst, &all(2)), all(2));
        let inst = one_row(&[0.7, 0.2, 0.1], 1.0);
        assert_eq!(alter_sorted(&inst, &all(3)), all(3));
    }

    #[test]
    fn powers_of_two_rounding() {
        assert_eq!(round_up_power_of_two(0.3).unwrap(), 0.5);
        assert_eq!(round_up_power_of_two(0.5).unwrap(), 0.5);
        assert_eq!(round_up_power_of_two(0.6).unwrap(), 1.0);
        assert_eq!(round_up_power_of_two(1.0).unwrap(), 1.0);
        assert_eq!(round_up_power_of_two(0.125).unwrap(), 0.125);
        assert_eq!(round_up_power_of_two(0.126).unwrap(), 0.25);
        assert!(round_up_power_of_two(1.5).is_err());
    }

    #[test]
    fn powers_of_two_traces() {
        let inst = one_row(&[1.0, 1.0], 2.0);
        assert_eq!(alter_powers_of_two(&inst, &all(2)).unwrap(), all(2));
        let inst = one_row(&[1.0, 1.0, 1.0], 2.0);
        assert_eq!(alter_powers_of_two(&inst, &all(3)).unwrap(), ItemSet::empty(3));
        // t-sizes (1, 0.5, 0.5, 0.5) with c = 2: the three halves see 2.5
        let inst = one_row(&[1.0, 0.3, 0.4, 0.5], 2.0);
        assert_eq!(alter_powers_of_two(&inst, &all(4)).unwrap(), ItemSet::from_indices(4, [0]));
        let bad = one_row(&[1.5], 2.0);
        assert!(alter_powers_of_two(&bad, &all(1)).is_err());
    }

    #[test]
    fn strawman_discards_whole_constraint() {
        let inst = one_row(&[1.0, 0.01, 0.01], 1.0);
        let alt = PreparedAlteration::new(&inst, AlterationRule::Strawman).unwrap();
        assert_eq!(alt.alter(&all(3)).survivors, ItemSet::empty(3));
        let feasible = ItemSet::from_indices(3, [1, 2]);
        assert_eq!(alt.alter(&feasible).survivors, feasible);
    }

    #[test]
    fn free_items_are_never_deleted() {
        let inst = PipInstance::new(vec![1.0; 3], vec![1.0], [(0, 0, 0.9), (1, 0, 0.9)]).unwrap();
        for rule in [AlterationRule::Simple, AlterationRule::Sorted, AlterationRule::PowersOfTwo] {
            let alt = PreparedAlteration::new(&inst, rule).unwrap().alter(&all(3));
            assert_eq!(alt.survivors, ItemSet::from_indices(3, [2]), "{rule:?}");
        }
    }

    #[test]
    fn monotonicity_checker_finds_violations() {
        // keep everything only when the full set is sampled
        let bad = |mask: u64| if mask == 0b111 { 0b111 } else { 0 };
        assert!(matches!(
            check_survival_monotone(bad, 3).unwrap(),
            MonotonicityCheck::Violated { larger: 0b111, .. }
        ));
        assert_eq!(check_survival_monotone(|m| m, 4).unwrap(), MonotonicityCheck::Holds);
    }
}
