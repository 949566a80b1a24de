use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Total-mass slack accepted by constructors and distance computations.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Finite distribution of point masses on the real line. Support is
/// strictly increasing, masses are nonnegative and sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDistribution {
    support: Vec<f64>,
    masses: Vec<f64>,
}

impl SpectralDistribution {
    /// Builds from `(location, mass)` pairs in any order. Repeated
    /// locations are merged; zero masses are kept only if every mass is zero
    /// (which then fails the normalization check).
    pub fn from_points<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut pts: Vec<(f64, f64)> = points.into_iter().collect();
        if pts.iter().any(|&(x, w)| !x.is_finite() || !w.is_finite()) {
            return Err(Error::InvalidParameter("non-finite point mass".into()));
        }
        if let Some(&(_, w)) = pts.iter().find(|&&(_, w)| w < 0.0) {
            return Err(Error::InvalidParameter(format!("negative mass {w}")));
        }
        pts.retain(|&(_, w)| w > 0.0);
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut support: Vec<f64> = Vec::with_capacity(pts.len());
        let mut masses: Vec<f64> = Vec::with_capacity(pts.len());
        for (x, w) in pts {
            match support.last() {
                Some(&last) if last == x => *masses.last_mut().unwrap() += w,
                _ => {
                    support.push(x);
                    masses.push(w);
                }
            }
        }
        let total = compensated_sum(masses.iter().copied());
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::Unnormalized(total));
        }
        Ok(Self { support, masses })
    }

    /// Like [`from_points`](Self::from_points) but rescales to total mass 1.
    pub fn normalized<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let pts: Vec<(f64, f64)> = points.into_iter().collect();
        let total = compensated_sum(pts.iter().map(|p| p.1));
        if !(total > 0.0) {
            return Err(Error::Unnormalized(total));
        }
        Self::from_points(pts.into_iter().map(|(x, w)| (x, w / total)))
    }

    /// Equal masses `1/n` at each value.
    pub fn uniform(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("no values".into()));
        }
        let w = 1.0 / values.len() as f64;
        Self::normalized(values.iter().map(|&x| (x, w)))
    }

    pub fn dirac(x: f64) -> Self {
        Self {
            support: vec![x],
            masses: vec![1.0],
        }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support.iter().copied().zip(self.masses.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.masses.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.points().map(|(x, w)| x * w))
    }

    /// `Σ w x^order`.
    pub fn moment(&self, order: i32) -> f64 {
        compensated_sum(self.points().map(|(x, w)| w * x.powi(order)))
    }

    /// Header `value,mass`, then one support point per line at round-trip
    /// precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,mass\n");
        for (x, w) in self.points() {
            writeln!(out, "{x},{w}").unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "value,mass" => {}
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "expected header \"value,mass\"".into(),
                })
            }
        }
        let mut pts = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse {
                line: idx + 1,
                message: format!("expected \"value,mass\", got {line:?}"),
            };
            let (x, w) = line.split_once(',').ok_or_else(bad)?;
            let x: f64 = x.trim().parse().map_err(|_| bad())?;
            let w: f64 = w.trim().parse().map_err(|_| bad())?;
            pts.push((x, w));
        }
        Self::from_points(pts)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}
