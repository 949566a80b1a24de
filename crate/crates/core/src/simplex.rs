//! Dense two-phase revised simplex for `min cᵀx  s.t.  Ax = b, x ≥ 0`.
//!
//! The basis matrix is refactorized (LU, partial pivoting) at every
//! iteration; the problems solved here have at most a few dozen rows, so
//! refactorization is cheap and avoids drift in an updated inverse.
//! Pricing is Dantzig's rule, falling back to Bland's rule after a run of
//! degenerate pivots and returning to Dantzig once the objective moves.

use crate::error::{Error, Result};

/// Minimum magnitude of a direction entry accepted as a pivot.
pub const PIVOT_TOLERANCE: f64 = 1e-10;
/// Reduced costs above `-OPTIMALITY_TOLERANCE` count as nonnegative.
pub const OPTIMALITY_TOLERANCE: f64 = 1e-10;

const DEGENERATE_RUN_LIMIT: usize = 30;
const HARRIS_RELAXATION: f64 = 1e-9;
const SINGULAR_PIVOT: f64 = 1e-13;

/// Equality-form linear program with nonnegative variables.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    rows: usize,
    columns: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
}

impl LinearProgram {
    pub fn new(rows: usize) -> Self {
        Self {
            rows,
            columns: Vec::new(),
            rhs: vec![0.0; rows],
            cost: Vec::new(),
        }
    }

    /// Adds a variable with objective coefficient `cost` and constraint
    /// column `column` (length = number of rows). Returns its index.
    pub fn add_variable(&mut self, cost: f64, column: Vec<f64>) -> usize {
        assert_eq!(column.len(), self.rows, "column length must equal row count");
        self.columns.push(column);
        self.cost.push(cost);
        self.columns.len() - 1
    }

    pub fn set_rhs(&mut self, row: usize, value: f64) {
        self.rhs[row] = value;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn variables(&self) -> usize {
        self.columns.len()
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        crate::numeric::compensated_sum(self.cost.iter().zip(x).map(|(c, v)| c * v))
    }

    /// Max-norm of `Ax − b`.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        (0..self.rows)
            .map(|i| {
                let ax = crate::numeric::compensated_sum(
                    self.columns.iter().zip(x).map(|(col, v)| col[i] * v),
                );
                (ax - self.rhs[i]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Optimal vertex with its dual certificate.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Row duals `y` with `Bᵀy = c_B`.
    pub duals: Vec<f64>,
    /// Most negative reduced cost `c_j − yᵀa_j` over all variables (≥ −tol at optimum).
    pub min_reduced_cost: f64,
    pub primal_residual: f64,
    pub iterations: usize,
}

/// Dense LU factorization with partial pivoting of a square matrix.
struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(n: usize, mut a: Vec<f64>) -> Option<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best < SINGULAR_PIVOT {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        a[i * n + j] -= f * a[k * n + j];
                    }
                }
            }
        }
        Some(Self { n, lu: a, perm })
    }

    /// Solves `B x = b`.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }

    /// Solves `Bᵀ y = c`.
    fn solve_transpose(&self, c: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut z = c.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[j * n + i] * z[j]).sum();
            z[i] = (z[i] - s) / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[j * n + i] * z[j]).sum();
            z[i] -= s;
        }
        let mut y = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            y[p] = z[k];
        }
        y
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Pricing {
    Dantzig,
    Bland,
}

struct Tableau<'a> {
    columns: Vec<&'a [f64]>,
    rhs: Vec<f64>,
    rows: usize,
    basis: Vec<usize>,
    iterations: usize,
    max_iterations: usize,
}

enum Outcome {
    Optimal,
    Unbounded(usize),
}

impl<'a> Tableau<'a> {
    fn factor(&self) -> Result<Lu> {
        let m = self.rows;
        let mut b = vec![0.0; m * m];
        for (k, &j) in self.basis.iter().enumerate() {
            for i in 0..m {
                b[i * m + k] = self.columns[j][i];
            }
        }
        Lu::factor(m, b).ok_or_else(|| {
            Error::Solver(format!("singular basis after {} iterations", self.iterations))
        })
    }

    fn dot(&self, y: &[f64], j: usize) -> f64 {
        self.columns[j].iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Runs simplex iterations for `cost` over columns where `eligible`
    /// holds, starting from the current (feasible) basis.
    fn run(&mut self, cost: &[f64], eligible: &dyn Fn(usize) -> bool) -> Result<Outcome> {
        let m = self.rows;
        let mut pricing = Pricing::Dantzig;
        let mut degenerate_run = 0usize;
        let mut best_objective = f64::INFINITY;
        let mut in_basis = vec![false; self.columns.len()];
        for &j in &self.basis {
            in_basis[j] = true;
        }
        loop {
            let lu = self.factor()?;
            let xb = lu.solve(&self.rhs);
            let cb: Vec<f64> = self.basis.iter().map(|&j| cost[j]).collect();
            let y = lu.solve_transpose(&cb);
            let objective: f64 = cb.iter().zip(&xb).map(|(c, x)| c * x).sum();
            if objective < best_objective - 1e-12 * (1.0 + objective.abs()) {
                best_objective = objective;
                degenerate_run = 0;
                pricing = Pricing::Dantzig;
            } else {
                degenerate_run += 1;
                if degenerate_run >= DEGENERATE_RUN_LIMIT {
                    pricing = Pricing::Bland;
                }
            }

            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.columns.len() {
                if in_basis[j] || !eligible(j) {
                    continue;
                }
                let d = cost[j] - self.dot(&y, j);
                if d >= -OPTIMALITY_TOLERANCE {
                    continue;
                }
                match pricing {
                    Pricing::Bland => {
                        entering = Some((j, d));
                        break;
                    }
                    Pricing::Dantzig => {
                        if entering.is_none_or(|(_, best)| d < best) {
                            entering = Some((j, d));
                        }
                    }
                }
            }
            let Some((enter, _)) = entering else {
                return Ok(Outcome::Optimal);
            };

            if self.iterations >= self.max_iterations {
                let infeasibility = xb.iter().fold(0.0f64, |a, &x| a.min(x));
                return Err(Error::Solver(format!(
                    "iteration cap {} reached (pricing {:?}, most negative basic value {:e})",
                    self.max_iterations, pricing, infeasibility
                )));
            }
            self.iterations += 1;

            let w = lu.solve(self.columns[enter]);
            let w_max = w.iter().fold(0.0f64, |a, &x| a.max(x));
            let pivot_tol = PIVOT_TOLERANCE.max(1e-9 * w_max);
            // Harris two-pass ratio test: bound the step using slightly
            // relaxed bounds, then take the largest pivot within that step
            let relaxed = (0..m)
                .filter(|&i| w[i] > pivot_tol)
                .map(|i| (xb[i].max(0.0) + HARRIS_RELAXATION) / w[i])
                .fold(f64::INFINITY, f64::min);
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                if w[i] <= pivot_tol {
                    continue;
                }
                let t = xb[i].max(0.0) / w[i];
                if t > relaxed {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some((r, _)) => match pricing {
                        Pricing::Bland => self.basis[i] < self.basis[r],
                        Pricing::Dantzig => w[i] > w[r],
                    },
                };
                if better {
                    leave = Some((i, t));
                }
            }
            let Some((row, _)) = leave else {
                return Ok(Outcome::Unbounded(enter));
            };

            in_basis[self.basis[row]] = false;
            in_basis[enter] = true;
            self.basis[row] = enter;
        }
    }
}

/// Solves the program to optimality. Fails on infeasibility,
/// unboundedness, a singular basis, or the iteration cap.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    let m = lp.rows;
    let n = lp.columns.len();
    if m == 0 {
        return Err(Error::Solver("program has no constraints".into()));
    }

    // rows scaled so that b >= 0; artificial identity appended
    let sign: Vec<f64> = lp.rhs.iter().map(|&b| if b < 0.0 { -1.0 } else { 1.0 }).collect();
    let mut owned: Vec<Vec<f64>> = lp
        .columns
        .iter()
        .map(|col| col.iter().zip(&sign).map(|(a, s)| a * s).collect())
        .collect();
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        owned.push(e);
    }
    let rhs: Vec<f64> = lp.rhs.iter().zip(&sign).map(|(b, s)| b * s).collect();

    let mut tab = Tableau {
        columns: owned.iter().map(Vec::as_slice).collect(),
        rhs,
        rows: m,
        basis: (n..n + m).collect(),
        iterations: 0,
        max_iterations: 50 * (n + m) + 1000,
    };

    let phase_one_cost: Vec<f64> = (0..n + m).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
    tab.run(&phase_one_cost, &|_| true)?;
    let lu = tab.factor()?;
    let xb = lu.solve(&tab.rhs);
    let infeasibility: f64 = tab
        .basis
        .iter()
        .zip(&xb)
        .filter(|(&j, _)| j >= n)
        .map(|(_, &x)| x.abs())
        .sum();
    let scale = 1.0 + tab.rhs.iter().map(|b| b.abs()).fold(0.0, f64::max);
    if infeasibility > 1e-9 * scale {
        return Err(Error::Solver(format!("infeasible (phase-one residual {infeasibility:e})")));
    }

    // pivot zero-level artificials out where a structural column allows it
    for r in 0..m {
        if tab.basis[r] < n {
            continue;
        }
        let lu = tab.factor()?;
        let mut e = vec![0.0; m];
        e[r] = 1.0;
        let row = lu.solve_transpose(&e);
        let candidate = (0..n)
            .filter(|j| !tab.basis.contains(j))
            .map(|j| (j, tab.dot(&row, j).abs()))
            .filter(|&(_, v)| v > 1e-7)
            .fold(None, |acc: Option<(usize, f64)>, x| match acc {
                Some(a) if a.1 >= x.1 => Some(a),
                _ => Some(x),
            });
        if let Some((j, _)) = candidate {
            tab.basis[r] = j;
        }
    }

    let phase_two_cost: Vec<f64> = (0..n + m).map(|j| if j < n { lp.cost[j] } else { 0.0 }).collect();
    match tab.run(&phase_two_cost, &|j| j < n)? {
        Outcome::Optimal => {}
        Outcome::Unbounded(j) => {
            return Err(Error::Solver(format!("unbounded along variable {j}")));
        }
    }

    let lu = tab.factor()?;
    let xb = lu.solve(&tab.rhs);
    let mut x = vec![0.0; n];
    for (&j, &v) in tab.basis.iter().zip(&xb) {
        if j < n {
            x[j] = v.max(0.0);
        }
    }
    let cb: Vec<f64> = tab.basis.iter().map(|&j| phase_two_cost[j]).collect();
    let y_scaled = lu.solve_transpose(&cb);
    let min_reduced_cost = (0..n)
        .map(|j| lp.cost[j] - tab.dot(&y_scaled, j))
        .fold(f64::INFINITY, f64::min);
    let duals = y_scaled.iter().zip(&sign).map(|(y, s)| y * s).collect();

    Ok(LpSolution {
        objective: lp.objective_at(&x),
        primal_residual: lp.primal_residual(&x),
        x,
        duals,
        min_reduced_cost,
        iterations: tab.iterations,
    })
}
