//! Dense primal simplex for bounded variables.
//!
//! Variables are shifted to `[0, hi - lo]`. Each row gets a slack; rows whose
//! shifted right-hand side is negative get an artificial variable and a
//! phase-one objective. Nonbasic variables sit at either bound, so box
//! constraints never become explicit rows. Pricing is Dantzig's rule until
//! the count of degenerate pivots passes `5 · (rows + cols)`, after which
//! Bland's rule takes over for the remainder of the phase.

use super::{LpError, LpModel, LpSolver};
use crate::instance::FractionalSolution;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simplex {
    pub pivot_tol: f64,
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    /// `None` means `50 · (rows + cols) + 1000`.
    pub max_iterations: Option<usize>,
}

impl Default for Simplex {
    fn default() -> Self {
        Simplex {
            pivot_tol: 1e-10,
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Basic,
    Lower,
    Upper,
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// Row-major `rows × cols`, the current `B⁻¹A`.
    a: Vec<f64>,
    /// Current value of the basic variable of each row.
    beta: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<Status>,
    upper: Vec<f64>,
    /// Columns that may not enter the basis.
    frozen: Vec<bool>,
    iterations: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.cols + c]
    }

    fn value(&self, col: usize, row_of: &[Option<usize>]) -> f64 {
        match self.status[col] {
            Status::Basic => self.beta[row_of[col].expect("basic column has a row")],
            Status::Lower => 0.0,
            Status::Upper => self.upper[col],
        }
    }

    fn row_of_basis(&self) -> Vec<Option<usize>> {
        let mut row_of = vec![None; self.cols];
        for (r, &b) in self.basis.iter().enumerate() {
            row_of[b] = Some(r);
        }
        row_of
    }

    fn pivot(&mut self, pr: usize, pc: usize, reduced: &mut [f64]) {
        let cols = self.cols;
        let piv = self.a[pr * cols + pc];
        for v in &mut self.a[pr * cols..(pr + 1) * cols] {
            *v /= piv;
        }
        let prow: Vec<f64> = self.a[pr * cols..(pr + 1) * cols].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let factor = self.a[r * cols + pc];
            if factor != 0.0 {
                let row = &mut self.a[r * cols..(r + 1) * cols];
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= factor * p;
                }
                row[pc] = 0.0;
            }
        }
        let dq = reduced[pc];
        if dq != 0.0 {
            for (d, p) in reduced.iter_mut().zip(&prow) {
                *d -= dq * p;
            }
        }
        reduced[pc] = 0.0;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for (c, dc) in d.iter_mut().enumerate() {
                    *dc -= cb * self.at(r, c);
                }
            }
        }
        for &b in &self.basis {
            d[b] = 0.0;
        }
        d
    }
}

impl Simplex {
    /// Maximizes `cost` over the tableau's current polytope.
    fn run_phase(&self, t: &mut Tableau, cost: &[f64], limit: usize) -> Result<(), LpError> {
        let mut reduced = t.reduced_costs(cost);
        let degenerate_budget = 5 * (t.rows + t.cols);
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            if t.iterations >= limit {
                return Err(LpError::IterationLimit(limit));
            }
            t.iterations += 1;

            let mut entering: Option<(usize, f64)> = None;
            for (c, &d) in reduced.iter().enumerate().take(t.cols) {
                if t.frozen[c] {
                    continue;
                }
                let attractive = match t.status[c] {
                    Status::Basic => false,
                    Status::Lower => d > self.optimality_tol && t.upper[c] > 0.0,
                    Status::Upper => d < -self.optimality_tol,
                };
                if !attractive {
                    continue;
                }
                if bland {
                    entering = Some((c, d));
                    break;
                }
                if entering.is_none_or(|(_, best)| d.abs() > best.abs()) {
                    entering = Some((c, d));
                }
            }
            let Some((q, _)) = entering else {
                return Ok(());
            };
            let dir = if t.status[q] == Status::Lower { 1.0 } else { -1.0 };

            // Ratio test. `None` leaving row means the entering variable
            // reaches its own opposite bound first.
            let mut theta = t.upper[q];
            let mut leaving: Option<(usize, Status, f64)> = None;
            for r in 0..t.rows {
                let alpha = dir * t.at(r, q);
                let b = t.basis[r];
                let (limit_r, to) = if alpha > self.pivot_tol {
                    ((t.beta[r] / alpha).max(0.0), Status::Lower)
                } else if alpha < -self.pivot_tol && t.upper[b].is_finite() {
                    (((t.upper[b] - t.beta[r]) / -alpha).max(0.0), Status::Upper)
                } else {
                    continue;
                };
                // ties with a bound flip keep the flip
                let better = if limit_r < theta - 1e-12 {
                    true
                } else if limit_r <= theta + 1e-12 {
                    match leaving {
                        Some((lr, _, _)) if bland => b < t.basis[lr],
                        Some((_, _, prev)) => alpha.abs() > prev.abs(),
                        None => false,
                    }
                } else {
                    false
                };
                if better {
                    theta = limit_r.min(theta);
                    leaving = Some((r, to, alpha));
                }
            }
            if theta.is_infinite() {
                return Err(LpError::Unbounded(q));
            }
            if theta <= 1e-12 {
                degenerate += 1;
                if degenerate > degenerate_budget {
                    bland = true;
                }
            }

            for r in 0..t.rows {
                let a = t.at(r, q);
                if a != 0.0 {
                    t.beta[r] -= dir * theta * a;
                }
            }
            match leaving {
                None => {
                    t.status[q] = if t.status[q] == Status::Lower {
                        Status::Upper
                    } else {
                        Status::Lower
                    };
                }
                Some((r, to, _)) => {
                    let start = if t.status[q] == Status::Lower { 0.0 } else { t.upper[q] };
                    let leaving_col = t.basis[r];
                    t.status[leaving_col] = to;
                    t.pivot(r, q, &mut reduced);
                    t.basis[r] = q;
                    t.status[q] = Status::Basic;
                    t.beta[r] = start + dir * theta;
                }
            }
        }
    }
}

impl LpSolver for Simplex {
    fn solve(&self, model: &LpModel) -> Result<FractionalSolution, LpError> {
        model.validate()?;
        let n = model.num_vars();
        let m = model.rows.len();

        let lo: Vec<f64> = model.bounds.iter().map(|b| b.0).collect();
        let shifted_rhs: Vec<f64> = model
            .rows
            .iter()
            .map(|row| row.rhs - row.coeffs.iter().map(|&(j, a)| a * lo[j]).sum::<f64>())
            .collect();
        let needs_artificial: Vec<bool> = shifted_rhs
            .iter()
            .map(|&b| b < -self.feasibility_tol * b.abs().max(1.0))
            .collect();
        let n_art = needs_artificial.iter().filter(|&&x| x).count();
        let cols = n + m + n_art;

        let mut t = Tableau {
            rows: m,
            cols,
            a: vec![0.0; m * cols],
            beta: vec![0.0; m],
            basis: vec![0; m],
            status: vec![Status::Lower; cols],
            upper: vec![f64::INFINITY; cols],
            frozen: vec![false; cols],
            iterations: 0,
        };
        for (j, &(l, h)) in model.bounds.iter().enumerate() {
            t.upper[j] = h - l;
        }
        let mut art = n + m;
        for (r, row) in model.rows.iter().enumerate() {
            let sign = if needs_artificial[r] { -1.0 } else { 1.0 };
            for &(j, a) in &row.coeffs {
                t.a[r * cols + j] += sign * a;
            }
            t.a[r * cols + n + r] = sign;
            if needs_artificial[r] {
                t.a[r * cols + art] = 1.0;
                t.basis[r] = art;
                t.beta[r] = -shifted_rhs[r];
                art += 1;
            } else {
                t.basis[r] = n + r;
                t.beta[r] = shifted_rhs[r].max(0.0);
            }
        }
        for &b in &t.basis {
            t.status[b] = Status::Basic;
        }

        let limit = self.max_iterations.unwrap_or(50 * (m + cols) + 1000);
        if n_art > 0 {
            let mut phase_one = vec![0.0; cols];
            for c in &mut phase_one[n + m..] {
                *c = -1.0;
            }
            self.run_phase(&mut t, &phase_one, limit)?;
            let row_of = t.row_of_basis();
            let infeasibility: f64 = (n + m..cols).map(|c| t.value(c, &row_of)).sum();
            let scale = shifted_rhs.iter().fold(1.0f64, |acc, b| acc.max(b.abs()));
            if infeasibility > self.feasibility_tol * scale {
                return Err(LpError::Infeasible);
            }
            for c in n + m..cols {
                t.upper[c] = 0.0;
                t.frozen[c] = true;
            }
        }

        let mut cost = vec![0.0; cols];
        cost[..n].copy_from_slice(&model.objective);
        self.run_phase(&mut t, &cost, limit)?;

        let row_of = t.row_of_basis();
        let x: Vec<f64> = (0..n)
            .map(|j| {
                let v = t.value(j, &row_of).clamp(0.0, t.upper[j]);
                (lo[j] + v).clamp(model.bounds[j].0, model.bounds[j].1)
            })
            .collect();
        let violation = model.max_violation(&x);
        let rhs_scale = model.rows.iter().fold(1.0f64, |acc, r| acc.max(r.rhs.abs()));
        if violation > 1e2 * self.feasibility_tol * rhs_scale {
            return Err(LpError::Numerical(format!(
                "solution violates a row by {violation:e}"
            )));
        }
        let objective = model.objective_value(&x);
        Ok(FractionalSolution { x, objective })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(model: &LpModel) -> Result<FractionalSolution, LpError> {
        Simplex::default().solve(model)
    }

    #[test]
    fn single_bounded_variable() {
        let mut model = LpModel::new(1);
        model.objective = vec![1.0];
        model.add_row("r", vec![(0, 1.0)], 1.0);
        let sol = solve(&model).unwrap();
        assert_eq!(sol.x, vec![1.0]);
        assert_eq!(sol.objective, 1.0);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y  s.t.  x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18  → (2, 6), 36
        let mut model = LpModel::new(2);
        model.objective = vec![3.0, 5.0];
        model.bounds = vec![(0.0, f64::INFINITY); 2];
        model.add_row("a", vec![(0, 1.0)], 4.0);
        model.add_row("b", vec![(1, 2.0)], 12.0);
        model.add_row("c", vec![(0, 3.0), (1, 2.0)], 18.0);
        let sol = solve(&model).unwrap();
        assert!((sol.objective - 36.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9 && (sol.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn upper_bounds_flip_without_pivot() {
        let mut model = LpModel::new(3);
        model.objective = vec![1.0, 2.0, 3.0];
        let sol = solve(&model).unwrap();
        assert_eq!(sol.x, vec![1.0, 1.0, 1.0]);
        assert_eq!(sol.objective, 6.0);
    }

    #[test]
    fn lower_bounds_use_phase_one() {
        // x ≥ 2 forced via bounds, x + y ≤ 3, max y → y = 1.
        let mut model = LpModel::new(2);
        model.objective = vec![0.0, 1.0];
        model.bounds = vec![(2.0, 5.0), (0.0, 10.0)];
        model.add_row("r", vec![(0, 1.0), (1, 1.0)], 3.0);
        let sol = solve(&model).unwrap();
        assert!((sol.x[0] - 2.0).abs() < 1e-9);
        assert!((sol.x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_requires_phase_one() {
        // -x ≤ -1 (x ≥ 1), x ≤ 3, max -x → x = 1
        let mut model = LpModel::new(1);
        model.objective = vec![-1.0];
        model.bounds = vec![(0.0, 3.0)];
        model.add_row("ge", vec![(0, -1.0)], -1.0);
        let sol = solve(&model).unwrap();
        assert!((sol.x[0] - 1.0).abs() < 1e-9, "{sol:?}");
    }

    #[test]
    fn infeasible_and_unbounded_detected() {
        let mut model = LpModel::new(1);
        model.bounds = vec![(2.0, 3.0)];
        model.add_row("r", vec![(0, 1.0)], 1.0);
        assert_eq!(solve(&model), Err(LpError::Infeasible));

        let mut model = LpModel::new(1);
        model.objective = vec![1.0];
        model.bounds = vec![(0.0, f64::INFINITY)];
        assert_eq!(solve(&model), Err(LpError::Unbounded(0)));
    }

    #[test]
    fn malformed_models_rejected() {
        let mut model = LpModel::new(1);
        model.bounds = vec![(1.0, 0.0)];
        assert!(matches!(solve(&model), Err(LpError::Malformed(_))));
        let mut model = LpModel::new(1);
        model.add_row("r", vec![(3, 1.0)], 1.0);
        assert!(matches!(solve(&model), Err(LpError::Malformed(_))));
    }

    #[test]
    fn iteration_limit_reported() {
        let mut model = LpModel::new(3);
        model.objective = vec![1.0, 1.0, 1.0];
        model.add_row("r", vec![(0, 1.0), (1, 1.0), (2, 1.0)], 1.5);
        let solver = Simplex {
            max_iterations: Some(1),
            ..Simplex::default()
        };
        assert_eq!(solver.solve(&model), Err(LpError::IterationLimit(1)));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling example, rewritten as a maximization.
        let mut model = LpModel::new(4);
        model.objective = vec![0.75, -150.0, 0.02, -6.0];
        model.bounds = vec![(0.0, f64::INFINITY); 4];
        model.add_row("a", vec![(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)], 0.0);
        model.add_row("b", vec![(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)], 0.0);
        model.add_row("c", vec![(2, 1.0)], 1.0);
        let sol = solve(&model).unwrap();
        assert!((sol.objective - 0.05).abs() < 1e-9, "{sol:?}");
    }
}
