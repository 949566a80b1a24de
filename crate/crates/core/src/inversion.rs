//! Moment inversion: find the distribution on a grid whose power moments
//! are closest, in L1, to a given moment vector.
//!
//! The program
//!
//! ```text
//! minimize    Σ_ℓ u_ℓ
//! subject to  −u_ℓ ≤ Σ_j x_j^ℓ p_j − m_ℓ ≤ u_ℓ     ℓ = 1..=L
//!             Σ_j p_j = 1,  p ≥ 0,  u ≥ 0
//! ```
//!
//! is an exact linearization of `min ‖Vp − m‖₁` over the probability simplex.

use crate::distribution::SpectralDistribution;
use crate::error::{Error, Result};
use crate::moments::MomentVector;
use crate::numeric::compensated_sum;
use crate::simplex::{self, LinearProgram};

/// Largest grid accepted by [`moment_inverse`].
pub const MAX_GRID_POINTS: usize = 10_000;
/// Certificate slack accepted on the LP optimum.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-8;

/// Evenly spaced support `lo, lo + h, lo + 2h, …` with the last point
/// clamped to `hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub spacing: f64,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, spacing: f64) -> Result<Self> {
        if !(lo < hi) || !(spacing > 0.0) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid needs lo < hi and spacing > 0 (got [{lo}, {hi}] step {spacing})"
            )));
        }
        Ok(Self { lo, hi, spacing })
    }

    /// The walk-matrix domain `[−1, 1]`.
    pub fn walk_domain(spacing: f64) -> Result<Self> {
        Self::new(-1.0, 1.0, spacing)
    }

    /// Index of the last point, `⌈(hi − lo)/h⌉`.
    pub fn last_index(&self) -> usize {
        // guard against (hi - lo)/h landing a hair above an integer
        let ratio = (self.hi - self.lo) / self.spacing;
        let rounded = ratio.round();
        if (ratio - rounded).abs() <= 1e-9 * rounded.max(1.0) {
            rounded as usize
        } else {
            ratio.ceil() as usize
        }
    }

    pub fn len(&self) -> usize {
        self.last_index() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        let t = self.last_index();
        (0..=t)
            .map(|i| {
                if i == t {
                    self.hi
                } else {
                    (self.lo + i as f64 * self.spacing).min(self.hi)
                }
            })
            .collect()
    }
}

/// Result of a moment inversion.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub distribution: SpectralDistribution,
    /// Mass on every grid point, zeros included.
    pub grid_masses: Vec<f64>,
    /// Attained `Σ_ℓ |Σ_j x_j^ℓ p_j − m_ℓ|`.
    pub objective: f64,
    pub iterations: usize,
}

/// `Σ_ℓ |Σ_j x_j^ℓ p_j − m_ℓ|` for masses `p` on `points`.
pub fn moment_residual(moments: &[f64], points: &[f64], masses: &[f64]) -> f64 {
    let mut powers: Vec<f64> = vec![1.0; points.len()];
    let mut terms = Vec::with_capacity(moments.len());
    for &target in moments {
        for (pw, &x) in powers.iter_mut().zip(points) {
            *pw *= x;
        }
        let fitted = compensated_sum(powers.iter().zip(masses).map(|(a, b)| a * b));
        terms.push((fitted - target).abs());
    }
    compensated_sum(terms)
}

/// Solves the L1 moment-matching program on `grid`.
pub fn moment_inverse(moments: &MomentVector, grid: &GridSpec) -> Result<Inversion> {
    let order = moments.max_order();
    if order == 0 {
        return Err(Error::InvalidParameter("need at least one moment".into()));
    }
    let points = grid.points();
    if points.len() > MAX_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "grid has {} points, limit is {MAX_GRID_POINTS}",
            points.len()
        )));
    }
    let target = moments.values();

    // rows: 0 = simplex, 1..=L upper band, L+1..=2L lower band
    let rows = 2 * order + 1;
    let mut lp = LinearProgram::new(rows);
    for &x in &points {
        let mut col = vec![0.0; rows];
        col[0] = 1.0;
        let mut pw = 1.0;
        for l in 0..order {
            pw *= x;
            col[1 + l] = pw;
            col[1 + order + l] = -pw;
        }
        lp.add_variable(0.0, col);
    }
    for l in 0..order {
        let mut col = vec![0.0; rows];
        col[1 + l] = -1.0;
        col[1 + order + l] = -1.0;
        lp.add_variable(1.0, col);
    }
    for r in 1..rows {
        let mut col = vec![0.0; rows];
        col[r] = 1.0;
        lp.add_variable(0.0, col);
    }
    lp.set_rhs(0, 1.0);
    for (l, &m) in target.iter().enumerate() {
        lp.set_rhs(1 + l, m);
        lp.set_rhs(1 + order + l, -m);
    }

    let sol = simplex::solve(&lp)?;
    if sol.min_reduced_cost < -CERTIFICATE_TOLERANCE || sol.primal_residual > CERTIFICATE_TOLERANCE {
        return Err(Error::Solver(format!(
            "optimality certificate failed: min reduced cost {:e}, primal residual {:e}, {} iterations",
            sol.min_reduced_cost, sol.primal_residual, sol.iterations
        )));
    }

    let mut grid_masses: Vec<f64> = sol.x[..points.len()].iter().map(|&p| p.max(0.0)).collect();
    let total = compensated_sum(grid_masses.iter().copied());
    grid_masses.iter_mut().for_each(|p| *p /= total);
    let distribution = SpectralDistribution::from_points(points.iter().copied().zip(grid_masses.iter().copied()))?;
    let objective = moment_residual(target, &points, &grid_masses);
    Ok(Inversion {
        distribution,
        grid_masses,
        objective,
        iterations: sol.iterations,
    })
}

/// Uniform mixture of `ds`.
pub fn average_distributions(ds: &[SpectralDistribution]) -> Result<SpectralDistribution> {
    if ds.is_empty() {
        return Err(Error::InvalidParameter("nothing to average".into()));
    }
    let w = 1.0 / ds.len() as f64;
    SpectralDistribution::normalized(ds.iter().flat_map(|d| d.points().map(move |(x, m)| (x, m * w))))
}

/// Maps a walk-matrix spectral distribution on `[−1, 1]` to the
/// normalized-Laplacian one on `[0, 2]` via `x ↦ 1 − x`.
pub fn walk_to_laplacian(d: &SpectralDistribution) -> Result<SpectralDistribution> {
    const SLACK: f64 = 1e-9;
    if let Some(&x) = d.support().iter().find(|&&x| !(-1.0 - SLACK..=1.0 + SLACK).contains(&x)) {
        return Err(Error::InvalidParameter(format!("support point {x} outside [-1, 1]")));
    }
    SpectralDistribution::from_points(d.points().map(|(x, m)| ((1.0 - x).clamp(0.0, 2.0), m)))
}
