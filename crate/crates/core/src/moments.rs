//! Spectral moments of the walk matrix `M = A D^{-1}` estimated from
//! random-walk return frequencies.
//!
//! The `ℓ`-th moment `(1/n) tr(M^ℓ)` equals the probability that an
//! `ℓ`-step walk from a uniform start vertex is back at its start, so the
//! fraction of sampled walks that return is an unbiased estimate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WalkOracle;
use crate::rng::RngStream;

/// Moments `m_1..=m_L`; `walks` is 0 when the moments are exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    max_order: usize,
    walks: u64,
    moments: Vec<f64>,
}

impl MomentVector {
    pub fn new(moments: Vec<f64>, walks: u64) -> Self {
        Self {
            max_order: moments.len(),
            walks,
            moments,
        }
    }

    /// `values()[k]` is the moment of order `k + 1`.
    pub fn values(&self) -> &[f64] {
        &self.moments
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn walks(&self) -> u64 {
        self.walks
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("moment vector serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("moment JSON: {e}")))?;
        if v.moments.len() != v.max_order {
            return Err(Error::LengthMismatch(v.max_order, v.moments.len()));
        }
        Ok(v)
    }
}

/// Return indicator of one `order`-step walk.
fn walk_returns(oracle: &WalkOracle<'_>, order: usize, rng: &mut RngStream) -> bool {
    let start = oracle.random_vertex(rng);
    let mut at = start;
    for _ in 0..order {
        at = oracle.random_neighbor(at, rng);
    }
    at == start
}

/// Single-order estimator: `walks` independent walks of exactly `order`
/// steps, returning the fraction that end at their start vertex.
///
/// Walk `i` draws from stream `i` of `seed`, so the result does not depend
/// on how walks are spread over threads.
pub fn approx_spectral_moment(oracle: &WalkOracle<'_>, order: usize, walks: u64, seed: u64) -> Result<f64> {
    if order == 0 || walks == 0 {
        return Err(Error::InvalidParameter("order and walk count must be positive".into()));
    }
    let returns: u64 = (0..walks)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i);
            walk_returns(oracle, order, &mut rng) as u64
        })
        .sum();
    Ok(returns as f64 / walks as f64)
}

/// Amortized estimator: each of `walks` walks runs `max_order` steps and
/// contributes a return indicator at every step, so one walk feeds all
/// orders. Costs exactly `walks * max_order` neighbor queries.
pub fn estimate_moments(oracle: &WalkOracle<'_>, max_order: usize, walks: u64, seed: u64) -> Result<MomentVector> {
    if max_order == 0 || walks == 0 {
        return Err(Error::InvalidParameter("order and walk count must be positive".into()));
    }
    let counts = (0..walks)
        .into_par_iter()
        .fold(
            || vec![0u64; max_order],
            |mut acc, i| {
                let mut rng = RngStream::new(seed, i);
                let start = oracle.random_vertex(&mut rng);
                let mut at = start;
                for slot in acc.iter_mut() {
                    at = oracle.random_neighbor(at, &mut rng);
                    if at == start {
                        *slot += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; max_order],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let moments = counts.into_iter().map(|c| c as f64 / walks as f64).collect();
    Ok(MomentVector::new(moments, walks))
}

/// Walks needed for one moment to be within `eps` of its mean with
/// probability at least `1 − delta` (Hoeffding): `⌈ ln(2/δ) / (2ε²) ⌉`.
pub fn required_walks(eps: f64, delta: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < eps < 1 and 0 < delta < 1, got eps = {eps}, delta = {delta}"
        )));
    }
    Ok((0.5 / (eps * eps) * (2.0 / delta).ln()).ceil() as u64)
}

/// Walks needed for all of `orders` moments to hold simultaneously, by a
/// union bound with failure budget `delta / orders` per moment.
pub fn required_walks_joint(eps: f64, delta: f64, orders: usize) -> Result<u64> {
    if orders == 0 {
        return Err(Error::InvalidParameter("orders must be positive".into()));
    }
    required_walks(eps, delta / orders as f64)
}
