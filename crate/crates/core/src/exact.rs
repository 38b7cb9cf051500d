//! Exact integral optima for small instances, and integrality gaps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ItemSet, PipInstance, FEASIBILITY_TOL};
use crate::lp::{build_natural_lp, LpError, LpModel, LpSolver, Relaxation, Simplex};

/// Largest total multiplicity `Σ u_i` searched exhaustively.
pub const EXHAUSTIVE_MAX_UNITS: u64 = 24;

/// Largest `n` accepted by branch-and-bound.
pub const BRANCH_AND_BOUND_MAX_N: usize = 40;

const INTEGRALITY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactMode {
    /// Exhaustive when `Σ u_i ≤ 24`, branch-and-bound otherwise.
    Auto,
    Exhaustive,
    BranchAndBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub set: ItemSet,
    pub value: f64,
    /// Search nodes visited (partial assignments or LP subproblems).
    pub nodes: u64,
    /// False only when branch-and-bound stopped at its node limit.
    pub proven_optimal: bool,
    pub mode: ExactMode,
}

pub fn solve_exact(inst: &PipInstance) -> Result<ExactResult> {
    solve_exact_with(inst, ExactMode::Auto)
}

pub fn solve_exact_with(inst: &PipInstance, mode: ExactMode) -> Result<ExactResult> {
    let units: u64 = inst.upper_bounds().iter().map(|&u| u64::from(u)).sum();
    match mode {
        ExactMode::Auto if units <= EXHAUSTIVE_MAX_UNITS => exhaustive(inst),
        ExactMode::Auto => BranchAndBound::default().solve(inst),
        ExactMode::Exhaustive if units <= EXHAUSTIVE_MAX_UNITS => exhaustive(inst),
        ExactMode::Exhaustive => Err(Error::TooLarge(format!(
            "exhaustive search needs sum of upper bounds <= {EXHAUSTIVE_MAX_UNITS}, got {units}"
        ))),
        ExactMode::BranchAndBound => BranchAndBound::default().solve(inst),
    }
}

fn fits(load: f64, cap: f64) -> bool {
    load <= cap + FEASIBILITY_TOL * cap.max(1.0)
}

struct Search<'a> {
    inst: &'a PipInstance,
    loads: Vec<f64>,
    counts: Vec<u32>,
    /// `Σ_{i' ≥ i} w_i' u_i'`, for pruning.
    suffix_value: Vec<f64>,
    best: Option<(Vec<u32>, f64)>,
    nodes: u64,
}

impl Search<'_> {
    fn descend(&mut self, i: usize, value: f64) {
        self.nodes += 1;
        if let Some((_, best)) = &self.best {
            if value + self.suffix_value[i] <= *best {
                return;
            }
        }
        if i == self.inst.n() {
            self.best = Some((self.counts.clone(), value));
            return;
        }
        let w = self.inst.weights()[i];
        let column = self.inst.column(i);
        // larger multiplicities first so good incumbents appear early
        let u = self.inst.upper_bounds()[i];
        for c in (0..=u).rev() {
            let mult = f64::from(c);
            if column
                .iter()
                .any(|&(j, s)| !fits(self.loads[j] + s * mult, self.inst.capacities()[j]))
            {
                continue;
            }
            for &(j, s) in column {
                self.loads[j] += s * mult;
            }
            self.counts[i] = c;
            self.descend(i + 1, value + w * mult);
            self.counts[i] = 0;
            for &(j, s) in column {
                self.loads[j] -= s * mult;
            }
        }
    }
}

/// Depth-first enumeration of all multiplicity vectors, pruning branches
/// that overfill a row or cannot beat the incumbent.
fn exhaustive(inst: &PipInstance) -> Result<ExactResult> {
    let n = inst.n();
    let mut suffix_value = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix_value[i] = suffix_value[i + 1] + inst.weights()[i] * f64::from(inst.upper_bounds()[i]);
    }
    let mut search = Search {
        inst,
        loads: vec![0.0; inst.m()],
        counts: vec![0; n],
        suffix_value,
        best: None,
        nodes: 0,
    };
    search.descend(0, 0.0);
    let (counts, _) = search.best.expect("the empty set is always feasible");
    let set = ItemSet::from_counts(counts);
    Ok(ExactResult {
        value: inst.value(&set)?,
        set,
        nodes: search.nodes,
        proven_optimal: true,
        mode: ExactMode::Exhaustive,
    })
}

/// Depth-first branch-and-bound on the natural LP, branching on the most
/// fractional variable.
#[derive(Debug, Clone)]
pub struct BranchAndBound<S = Simplex> {
    pub solver: S,
    pub node_limit: u64,
}

impl Default for BranchAndBound {
    fn default() -> Self {
        BranchAndBound {
            solver: Simplex::default(),
            node_limit: 2_000_000,
        }
    }
}

impl<S: LpSolver> BranchAndBound<S> {
    pub fn solve(&self, inst: &PipInstance) -> Result<ExactResult> {
        let n = inst.n();
        if n > BRANCH_AND_BOUND_MAX_N {
            return Err(Error::TooLarge(format!(
                "branch-and-bound supports n <= {BRANCH_AND_BOUND_MAX_N}, got {n}"
            )));
        }
        let root = build_natural_lp(inst);
        // with integral weights every solution value is an integer
        let integral = inst.weights().iter().all(|w| w.fract() == 0.0);
        let mut best_set = ItemSet::empty(n);
        let mut best = 0.0;
        let mut nodes = 0u64;
        let mut stack: Vec<Vec<(f64, f64)>> = vec![root.bounds.clone()];
        while let Some(bounds) = stack.pop() {
            if nodes >= self.node_limit {
                return Ok(ExactResult {
                    set: best_set,
                    value: best,
                    nodes,
                    proven_optimal: false,
                    mode: ExactMode::BranchAndBound,
                });
            }
            nodes += 1;
            let model = LpModel {
                bounds,
                ..root.clone()
            };
            let sol = match self.solver.solve(&model) {
                Ok(sol) => sol,
                Err(LpError::Infeasible) => continue,
                Err(e) => return Err(e.into()),
            };
            let tol = 1e-9 * sol.objective.abs().max(1.0);
            let bound = if integral { (sol.objective + tol).floor() } else { sol.objective - tol };
            if bound <= best {
                continue;
            }
            // rounding down keeps a packing solution feasible
            let floor = ItemSet::from_counts(sol.x.iter().map(|&v| (v + INTEGRALITY_TOL).floor() as u32).collect());
            if inst.check_feasible(&floor)? {
                let value = inst.value(&floor)?;
                if value > best {
                    best = value;
                    best_set = floor;
                }
            }
            let branch = sol
                .x
                .iter()
                .enumerate()
                .map(|(i, &v)| (i, v, (v - v.round()).abs()))
                .filter(|&(_, _, frac)| frac > INTEGRALITY_TOL)
                .max_by(|a, b| a.2.total_cmp(&b.2).then(b.0.cmp(&a.0)));
            let Some((i, v, _)) = branch else {
                // integral up to tolerance: rounding recovers this vertex
                let rounded = ItemSet::from_counts(sol.x.iter().map(|&v| v.round() as u32).collect());
                if inst.check_feasible(&rounded)? {
                    let value = inst.value(&rounded)?;
                    if value > best {
                        best = value;
                        best_set = rounded;
                    }
                }
                continue;
            };
            let mut down = model.bounds.clone();
            down[i].1 = v.floor();
            let mut up = model.bounds;
            up[i].0 = v.ceil();
            stack.push(down);
            stack.push(up);
        }
        Ok(ExactResult {
            set: best_set,
            value: best,
            nodes,
            proven_optimal: true,
            mode: ExactMode::BranchAndBound,
        })
    }
}

/// LP optimum over exact integral optimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralityGap {
    pub relaxation: Relaxation,
    pub lp_value: f64,
    pub exact_value: f64,
    /// `None` when the exact optimum is zero.
    pub ratio: Option<f64>,
}

pub fn integrality_gap(inst: &PipInstance, relaxation: Relaxation) -> Result<IntegralityGap> {
    let lp_value = Simplex::default().solve(&relaxation.build(inst)?)?.objective;
    let exact_value = solve_exact(inst)?.value;
    Ok(IntegralityGap {
        relaxation,
        lp_value,
        exact_value,
        ratio: (exact_value > 0.0).then(|| lp_value / exact_value),
    })
}
