//! Distances and transformations between spectra.

use crate::distribution::{SpectralDistribution, MASS_TOLERANCE};
use crate::error::{Error, Result};
use crate::exact::SortedSpectrum;
use crate::numeric::compensated_sum;

fn check_normalized(d: &SpectralDistribution) -> Result<()> {
    let total = d.total_mass();
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::Unnormalized(total));
    }
    Ok(())
}

/// Earth mover (Wasserstein-1) distance: `∫ |F_p − F_q| dx`, swept over the
/// merged support where both CDFs are piecewise constant.
pub fn emd_w1(p: &SpectralDistribution, q: &SpectralDistribution) -> Result<f64> {
    check_normalized(p)?;
    check_normalized(q)?;
    let (ps, pw) = (p.support(), p.masses());
    let (qs, qw) = (q.support(), q.masses());
    let (mut i, mut j) = (0, 0);
    let (mut fp, mut fq) = (0.0f64, 0.0f64);
    let mut terms = Vec::with_capacity(ps.len() + qs.len());
    let mut prev: Option<f64> = None;
    while i < ps.len() || j < qs.len() {
        let x = match (ps.get(i), qs.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        if let Some(px) = prev {
            terms.push((fp - fq).abs() * (x - px));
        }
        while i < ps.len() && ps[i] == x {
            fp += pw[i];
            i += 1;
        }
        while j < qs.len() && qs[j] == x {
            fq += qw[j];
            j += 1;
        }
        prev = Some(x);
    }
    Ok(compensated_sum(terms))
}

/// `(1/n) Σ |a_i − b_i|` for two sorted spectra of equal length, which is
/// the earth mover distance between their uniform point-mass distributions.
pub fn sorted_vector_distance(a: &SortedSpectrum, b: &SortedSpectrum) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let total = compensated_sum(a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()));
    Ok(total / a.len() as f64)
}

/// Uniform point masses at the eigenvalues.
pub fn spectrum_distribution(s: &SortedSpectrum) -> Result<SpectralDistribution> {
    SpectralDistribution::uniform(s.values())
}

/// Collapses `q` onto `n` equally weighted points: `v_i` is the mean of
/// the inverse CDF of `q` over the quantile band `[i/n, (i+1)/n)`. Point
/// masses straddling a band boundary are split between the bands.
pub fn discretize_spectrum(n: usize, q: &SpectralDistribution) -> Result<SortedSpectrum> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    check_normalized(q)?;
    let total = q.total_mass();
    let width = 1.0 / n as f64;
    let mut values = Vec::with_capacity(n);
    let mut k = 0usize;
    let mut cum_lo = 0.0f64;
    let mut cum_hi = if q.len() == 1 { 1.0 } else { q.masses()[0] / total };
    let mut running = 0.0f64;
    for band in 0..n {
        let lo = band as f64 * width;
        let hi = if band + 1 == n { 1.0 } else { (band + 1) as f64 * width };
        let mut acc = Vec::new();
        loop {
            let overlap = cum_hi.min(hi) - cum_lo.max(lo);
            if overlap > 0.0 {
                acc.push(q.support()[k] * overlap);
            }
            if cum_hi > hi || k + 1 == q.len() {
                break;
            }
            k += 1;
            running += q.masses()[k - 1] / total;
            cum_lo = running;
            cum_hi = if k + 1 == q.len() { 1.0 } else { running + q.masses()[k] / total };
        }
        values.push(compensated_sum(acc) / (hi - lo));
    }
    SortedSpectrum::new(values)
}

/// Spectrum of a disjoint union: the merged multiset of eigenvalues.
pub fn union_spectrum(a: &SortedSpectrum, b: &SortedSpectrum) -> SortedSpectrum {
    let (x, y) = (a.values(), b.values());
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        if x[i] <= y[j] {
            out.push(x[i]);
            i += 1;
        } else {
            out.push(y[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    SortedSpectrum::new(out).expect("merged spectra contain no NaN")
}
