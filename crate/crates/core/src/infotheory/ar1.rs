use super::PairedSamples;
use crate::error::{reject, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// `x_t = c + a x_{t−1} + η_t` with `y_t = a x_{t−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ar1Series {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Ar1Series {
    pub fn pairs(&self) -> Result<PairedSamples> {
        PairedSamples::new(self.x.clone(), self.y.clone())
    }
}

/// Stationary AR(1) path of length `n`; the start value is drawn from the
/// stationary law so no burn-in is needed.
pub fn ar1_generate(a: f64, c: f64, sigma: f64, n: usize, seed: u64) -> Result<Ar1Series> {
    if !(a.abs() < 1.0) {
        return reject(format!("|a| = {} is not stationary", a.abs()));
    }
    if !(sigma >= 0.0) || !c.is_finite() {
        return reject("sigma must be non-negative and c finite");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma).map_err(|e| crate::Error::RejectedInput(e.to_string()))?;
    let start = Normal::new(c / (1.0 - a), sigma / (1.0 - a * a).sqrt())
        .map_err(|e| crate::Error::RejectedInput(e.to_string()))?;
    let mut prev = start.sample(&mut rng);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let next = c + a * prev + noise.sample(&mut rng);
        y.push(a * prev);
        x.push(next);
        prev = next;
    }
    Ok(Ar1Series { x, y })
}
