//! LP relaxations of packing instances and a self-contained simplex solver.

mod simplex;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{FractionalSolution, PipInstance};

pub use simplex::Simplex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("model is infeasible")]
    Infeasible,
    #[error("model is unbounded in variable {0}")]
    Unbounded(usize),
    #[error("iteration limit of {0} exceeded")]
    IterationLimit(usize),
    #[error("numerical trouble: {0}")]
    Numerical(String),
    #[error("malformed model: {0}")]
    Malformed(String),
}

/// A `≤` row `Σ coeffs · x ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpRow {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// `max c·x  s.t.  rows,  lo ≤ x ≤ hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpModel {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    /// Per-variable `(lo, hi)`; `hi` may be `f64::INFINITY`.
    pub bounds: Vec<(f64, f64)>,
}

impl LpModel {
    /// Model on `n` variables with zero objective, no rows, and bounds `[0, 1]`.
    pub fn new(n: usize) -> Self {
        LpModel {
            objective: vec![0.0; n],
            rows: Vec::new(),
            bounds: vec![(0.0, 1.0); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, name: impl Into<String>, coeffs: Vec<(usize, f64)>, rhs: f64) {
        self.rows.push(LpRow {
            name: name.into(),
            coeffs,
            rhs,
        });
    }

    /// Copy of the model with the objective replaced.
    pub fn with_objective(&self, objective: Vec<f64>) -> Self {
        LpModel {
            objective,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(LpError::Malformed(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        if let Some(j) = self.objective.iter().position(|c| !c.is_finite()) {
            return Err(LpError::Malformed(format!("objective coefficient {j} not finite")));
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !lo.is_finite() || hi.is_nan() || lo > hi {
                return Err(LpError::Malformed(format!("bad bounds [{lo}, {hi}] on x{j}")));
            }
        }
        for row in &self.rows {
            if !row.rhs.is_finite() {
                return Err(LpError::Malformed(format!("row {} rhs not finite", row.name)));
            }
            for &(j, a) in &row.coeffs {
                if j >= n || !a.is_finite() {
                    return Err(LpError::Malformed(format!(
                        "row {} has bad coefficient ({j}, {a})",
                        row.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Largest violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|row| {
            let lhs: f64 = row.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            (lhs - row.rhs).max(0.0)
        });
        let bounds = self
            .bounds
            .iter()
            .zip(x)
            .map(|(&(lo, hi), &v)| (lo - v).max(v - hi).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Writes the model in CPLEX LP text format.
    pub fn to_lp_format(&self) -> String {
        fn terms(coeffs: impl Iterator<Item = (usize, f64)>) -> String {
            let mut out = String::new();
            for (pos, (j, a)) in coeffs.enumerate() {
                let sign = if a < 0.0 { "-" } else { "+" };
                if pos == 0 && a >= 0.0 {
                    write!(out, "{} x{j}", a.abs()).unwrap();
                } else {
                    write!(out, " {sign} {} x{j}", a.abs()).unwrap();
                }
            }
            if out.is_empty() {
                out.push_str("0 x0");
            }
            out
        }
        let mut out = String::from("\\ column-sparse packing relaxation\nMaximize\n obj: ");
        out += &terms(self.objective.iter().copied().enumerate().filter(|&(_, c)| c != 0.0));
        out += "\nSubject To\n";
        for row in &self.rows {
            writeln!(out, " {}: {} <= {}", row.name, terms(row.coeffs.iter().copied()), row.rhs)
                .unwrap();
        }
        out += "Bounds\n";
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if hi.is_infinite() {
                writeln!(out, " x{j} >= {lo}").unwrap();
            } else {
                writeln!(out, " {lo} <= x{j} <= {hi}").unwrap();
            }
        }
        out += "End\n";
        out
    }
}

/// Which relaxation of a packing instance to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relaxation {
    Natural,
    Strengthened,
}

impl Relaxation {
    pub fn build(self, inst: &PipInstance) -> Result<LpModel, LpError> {
        match self {
            Relaxation::Natural => Ok(build_natural_lp(inst)),
            Relaxation::Strengthened => build_strengthened_lp(inst),
        }
    }
}

/// Pluggable LP engine. [`Simplex`] is the reference implementation.
pub trait LpSolver {
    fn solve(&self, model: &LpModel) -> Result<FractionalSolution, LpError>;
}

/// Items that are big for constraint `j`: size above half the capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct BigItemIndex {
    pub per_constraint: Vec<Vec<usize>>,
}

impl BigItemIndex {
    pub fn new(inst: &PipInstance) -> Self {
        let per_constraint = (0..inst.m())
            .map(|j| {
                let half = inst.capacities()[j] / 2.0;
                inst.row(j)
                    .iter()
                    .filter(|&&(_, s)| s > half)
                    .map(|&(i, _)| i)
                    .collect()
            })
            .collect();
        BigItemIndex { per_constraint }
    }

    pub fn big_items(&self, constraint: usize) -> &[usize] {
        &self.per_constraint[constraint]
    }
}

/// `max w·x  s.t.  Σ_i s_ij x_i ≤ c_j,  0 ≤ x_i ≤ u_i`.
pub fn build_natural_lp(inst: &PipInstance) -> LpModel {
    let mut model = LpModel::new(inst.n());
    model.objective = inst.weights().to_vec();
    model.bounds = inst
        .upper_bounds()
        .iter()
        .map(|&u| (0.0, f64::from(u)))
        .collect();
    for j in 0..inst.m() {
        model.add_row(format!("c{j}"), inst.row(j).to_vec(), inst.capacities()[j]);
    }
    model
}

/// Natural LP plus `Σ_{i∈B(j)} x_i ≤ 1` for every constraint with a nonempty
/// set `B(j)` of big items. Requires upper bounds of at most one.
pub fn build_strengthened_lp(inst: &PipInstance) -> Result<LpModel, LpError> {
    if inst.upper_bounds().iter().any(|&u| u > 1) {
        return Err(LpError::Malformed(
            "strengthened relaxation requires 0/1 variables".into(),
        ));
    }
    let mut model = build_natural_lp(inst);
    let big = BigItemIndex::new(inst);
    for (j, items) in big.per_constraint.iter().enumerate() {
        if !items.is_empty() {
            model.add_row(format!("big{j}"), items.iter().map(|&i| (i, 1.0)).collect(), 1.0);
        }
    }
    Ok(model)
}

/// Solves with the reference simplex.
pub fn solve_lp(model: &LpModel) -> Result<FractionalSolution, LpError> {
    Simplex::default().solve(model)
}

/// Optimal vertex of the model's polytope for `direction`.
pub fn maximize_linear_over_polytope(
    model: &LpModel,
    direction: &[f64],
) -> Result<FractionalSolution, LpError> {
    if direction.len() != model.num_vars() {
        return Err(LpError::Malformed(format!(
            "direction has {} entries for {} variables",
            direction.len(),
            model.num_vars()
        )));
    }
    solve_lp(&model.with_objective(direction.to_vec()))
}
