//! Ground-truth spectra: dense normalized Laplacian plus a full symmetric
//! eigensolve.

use std::fmt::Write as _;
use std::path::Path;

use crate::eigen::{self, DenseMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::moments::MomentVector;

/// Default vertex-count limit for dense eigendecomposition.
pub const DENSE_LIMIT: usize = 5000;

/// Normalized-Laplacian eigenvalues in nondecreasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct SortedSpectrum {
    values: Vec<f64>,
}

impl SortedSpectrum {
    /// Sorts `values`; NaN is rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidParameter("spectrum contains NaN".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// One eigenvalue per line at round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for x in &self.values {
            writeln!(out, "{x}").unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            values.push(line.parse::<f64>().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("invalid eigenvalue {line:?}"),
            })?);
        }
        Self::new(values)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Dense `I − D^{-1/2} A D^{-1/2}`. Rows and columns of isolated vertices
/// are all zero.
pub fn normalized_laplacian(g: &Graph) -> Result<DenseMatrix> {
    normalized_laplacian_with_limit(g, DENSE_LIMIT)
}

pub fn normalized_laplacian_with_limit(g: &Graph, limit: usize) -> Result<DenseMatrix> {
    let n = g.vertex_count();
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|v| match g.degree(v) {
            0 => 0.0,
            d => 1.0 / (d as f64).sqrt(),
        })
        .collect();
    let mut l = DenseMatrix::zeros(n);
    for v in 0..n {
        if g.degree(v) > 0 {
            l.set(v, v, 1.0);
        }
        for &u in g.neighbors(v) {
            l.set(v, u, -inv_sqrt[v] * inv_sqrt[u]);
        }
    }
    Ok(l)
}

/// All normalized-Laplacian eigenvalues of `g`, sorted and clamped to `[0, 2]`.
pub fn exact_spectrum(g: &Graph) -> Result<SortedSpectrum> {
    exact_spectrum_with_limit(g, DENSE_LIMIT)
}

pub fn exact_spectrum_with_limit(g: &Graph, limit: usize) -> Result<SortedSpectrum> {
    let l = normalized_laplacian_with_limit(g, limit)?;
    let values = eigen::symmetric_eigenvalues(&l)?
        .into_iter()
        .map(|x| x.clamp(0.0, 2.0))
        .collect();
    SortedSpectrum::new(values)
}

/// Power moments `(1/n) Σ (1 − λ_i)^ℓ`, `ℓ = 1..=max_order`, of the walk
/// matrix whose eigenvalues are `1 − λ_i`.
pub fn exact_moments(spectrum: &SortedSpectrum, max_order: usize) -> MomentVector {
    let n = spectrum.len() as f64;
    let mut sums = vec![0.0; max_order];
    for &lambda in spectrum.values() {
        let mu = 1.0 - lambda;
        let mut power = 1.0;
        for s in sums.iter_mut() {
            power *= mu;
            *s += power;
        }
    }
    MomentVector::new(sums.into_iter().map(|s| s / n).collect(), 0)
}
