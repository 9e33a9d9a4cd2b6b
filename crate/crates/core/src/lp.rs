//! Small dense linear programs in standard inequality form.
//!
//! ```text
//! minimize    c . x
//! subject to  A x <= b,   x >= 0
//! ```
//!
//! Solved by a two-phase dense tableau simplex with Bland's anti-cycling
//! rule. Problem sizes here are tiny (a day of 72 slots yields on the order
//! of 10^2 variables and rows), so the dense tableau with reduced costs
//! recomputed from the basis each iteration is both simple and numerically
//! safe.

use crate::envelope::ControlPoint;
use crate::error::{Error, Result};

/// Entries smaller than this cannot serve as pivots.
const PIVOT_TOL: f64 = 1e-11;
/// Reduced-cost and phase-1 feasibility threshold.
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Structural variable values; empty unless `Optimal`.
    pub x: Vec<f64>,
    /// `c . x` when optimal, `+inf` when infeasible, `-inf` when unbounded.
    pub objective_value: f64,
}

/// `minimize objective . x  s.t.  constraints * x <= bounds, x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    constraints: Vec<Vec<f64>>,
    bounds: Vec<f64>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, constraints: Vec<Vec<f64>>, bounds: Vec<f64>) -> Result<Self> {
        let n = objective.len();
        if constraints.len() != bounds.len() {
            return Err(Error::InvalidInput(format!(
                "{} constraint rows but {} bounds",
                constraints.len(),
                bounds.len()
            )));
        }
        for (i, row) in constraints.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "constraint row {i} has {} coefficients, expected {n}",
                    row.len()
                )));
            }
        }
        let all_finite = objective.iter().all(|v| v.is_finite())
            && bounds.iter().all(|v| v.is_finite())
            && constraints.iter().flatten().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidInput("non-finite LP coefficient".into()));
        }
        Ok(Self { objective, constraints, bounds })
    }

    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.bounds.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Vec<f64>] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn solve(&self) -> Result<LpSolution> {
        Tableau::new(self).solve(&self.objective)
    }
}

/// Dense simplex tableau over structural, slack and artificial columns.
struct Tableau {
    n_structural: usize,
    n_slack: usize,
    n_artificial: usize,
    /// row-major, width = total columns + 1 (rhs last)
    rows: Vec<Vec<f64>>,
    /// basic variable (column index) of each row
    basis: Vec<usize>,
}

impl Tableau {
    fn new(lp: &LinearProgram) -> Self {
        let n = lp.num_variables();
        let m = lp.num_constraints();
        let negated: Vec<bool> = lp.bounds.iter().map(|&b| b < 0.0).collect();
        let n_artificial = negated.iter().filter(|&&v| v).count();
        let width = n + m + n_artificial + 1;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art = 0;
        for i in 0..m {
            let mut row = vec![0.0; width];
            let sign = if negated[i] { -1.0 } else { 1.0 };
            for j in 0..n {
                row[j] = sign * lp.constraints[i][j];
            }
            row[n + i] = sign; // slack
            row[width - 1] = sign * lp.bounds[i];
            if negated[i] {
                let col = n + m + art;
                row[col] = 1.0;
                basis.push(col);
                art += 1;
            } else {
                basis.push(n + i);
            }
            rows.push(row);
        }
        Tableau { n_structural: n, n_slack: m, n_artificial, rows, basis }
    }

    fn total_columns(&self) -> usize {
        self.n_structural + self.n_slack + self.n_artificial
    }

    fn rhs(&self, row: usize) -> f64 {
        *self.rows[row].last().unwrap()
    }

    fn solve(mut self, objective: &[f64]) -> Result<LpSolution> {
        if self.n_artificial > 0 {
            let mut phase1 = vec![0.0; self.total_columns()];
            for j in self.n_structural + self.n_slack..self.total_columns() {
                phase1[j] = 1.0;
            }
            self.run(&phase1, self.total_columns())?;
            let infeasibility: f64 =
                self.basis.iter().zip(0..).map(|(&b, i)| phase1[b] * self.rhs(i)).sum();
            if infeasibility > FEAS_TOL {
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    x: Vec::new(),
                    objective_value: f64::INFINITY,
                });
            }
            self.evict_artificials()?;
        }

        let mut phase2 = vec![0.0; self.total_columns()];
        phase2[..self.n_structural].copy_from_slice(objective);
        // Artificial columns are frozen out of phase 2.
        let allowed = self.n_structural + self.n_slack;
        if !self.run(&phase2, allowed)? {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                x: Vec::new(),
                objective_value: f64::NEG_INFINITY,
            });
        }

        let mut x = vec![0.0; self.n_structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_structural {
                x[b] = self.rhs(i);
            }
        }
        // + 0.0 turns the empty-sum identity -0.0 into plain zero.
        let objective_value = objective.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>() + 0.0;
        Ok(LpSolution { status: LpStatus::Optimal, x, objective_value })
    }

    /// Runs simplex iterations for the given cost vector, considering only
    /// columns below `allowed` for entering. Returns false when an improving
    /// ray proves the program unbounded.
    fn run(&mut self, costs: &[f64], allowed: usize) -> Result<bool> {
        let m = self.rows.len();
        // Bland's rule terminates; the cap is a defensive backstop.
        let max_iterations = 10_000 * (m + self.total_columns() + 1);
        for _ in 0..max_iterations {
            let entering = match self.entering_column(costs, allowed) {
                Some(j) => j,
                None => return Ok(true),
            };
            let leaving = match self.leaving_row(entering)? {
                Some(i) => i,
                None => return Ok(false),
            };
            self.pivot(leaving, entering);
        }
        Err(Error::NumericalFailure("simplex iteration cap exceeded".into()))
    }

    /// Bland: the lowest-index non-basic column with negative reduced cost.
    fn entering_column(&self, costs: &[f64], allowed: usize) -> Option<usize> {
        for j in 0..allowed {
            if self.basis.contains(&j) {
                continue;
            }
            let mut reduced = costs[j];
            for (i, &b) in self.basis.iter().enumerate() {
                if costs[b] != 0.0 {
                    reduced -= costs[b] * self.rows[i][j];
                }
            }
            if reduced < -FEAS_TOL {
                return Some(j);
            }
        }
        None
    }

    /// Minimum-ratio row; ties broken by the smallest basic variable index
    /// (Bland). `None` means no positive pivot entry exists in the column.
    fn leaving_row(&self, entering: usize) -> Result<Option<usize>> {
        let mut best: Option<(usize, f64)> = None;
        let mut saw_tiny_positive = false;
        for i in 0..self.rows.len() {
            let a = self.rows[i][entering];
            if a > PIVOT_TOL {
                let ratio = self.rhs(i) / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - 1e-12
                            || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            } else if a > 0.0 {
                saw_tiny_positive = true;
            }
        }
        match best {
            Some((i, _)) => Ok(Some(i)),
            // A column whose only positive entries sit below the pivot
            // threshold can certify neither a pivot nor a ray.
            None if saw_tiny_positive => Err(Error::NumericalFailure(format!(
                "pivot magnitudes below {PIVOT_TOL} in entering column {entering}"
            ))),
            None => Ok(None),
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= pivot;
        }
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col];
            if factor == 0.0 {
                continue;
            }
            let (pivot_row, other_row) = if i < row {
                let (a, b) = self.rows.split_at_mut(row);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = self.rows.split_at_mut(i);
                (&a[row], &mut b[0])
            };
            for (o, p) in other_row.iter_mut().zip(pivot_row) {
                *o -= factor * p;
            }
            self.rows[i][col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// After a feasible phase 1, drive leftover artificial variables (all at
    /// zero level) out of the basis, dropping rows that turn out redundant.
    fn evict_artificials(&mut self) -> Result<()> {
        let art_start = self.n_structural + self.n_slack;
        let mut row = 0;
        while row < self.rows.len() {
            if self.basis[row] >= art_start {
                let col = (0..art_start)
                    .find(|&j| self.rows[row][j].abs() > PIVOT_TOL && !self.basis.contains(&j));
                match col {
                    Some(j) => self.pivot(row, j),
                    None => {
                        // No usable entry: the row is a linear combination of
                        // the others and carries no constraint.
                        self.rows.remove(row);
                        self.basis.remove(row);
                        continue;
                    }
                }
            }
            row += 1;
        }
        Ok(())
    }
}

/// The vertex of `vertices` minimizing the linear objective
/// `objective.0 * x + objective.1 * y`; ties keep the lowest index.
///
/// Returns `(index, objective value)`, or `None` for an empty list.
pub fn enumerate_polygon_optimum(
    vertices: &[ControlPoint],
    objective: (f64, f64),
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in vertices.iter().enumerate() {
        let value = objective.0 * v.x + objective.1 * v.y;
        if best.is_none_or(|(_, bv)| value < bv) {
            best = Some((i, value));
        }
    }
    best
}
