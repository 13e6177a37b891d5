use super::model::ProductionModelSpec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// `σ² tanh(g/2)`, the large-`t` increment variance in the narrow regime.
pub fn tanh_law(g: f64, sigma: f64) -> f64 {
    sigma * sigma * (0.5 * g).tanh()
}

/// `σ²/(e^{2g} − 1)`, the stationary variance of `y_t` in the narrow regime.
pub fn stationary_variance(g: f64, sigma: f64) -> f64 {
    sigma * sigma / (2.0 * g).exp_m1()
}

/// `ln Σ_{i=0}^{t} e^{ig}` for `g > 0`.
fn log_z0(g: f64, t: usize) -> f64 {
    let n = g * (t + 1) as f64;
    n + (-(-n).exp_m1()).ln() - g.exp_m1().ln()
}

/// `1 − Z_0(i−1)/Z_0(t)`.
fn weight(g: f64, i: usize, t: usize) -> f64 {
    let (a, b) = (g * i as f64, g * (t + 1) as f64);
    1.0 - (a - b).exp() * (-(-a).exp_m1()) / (-(-b).exp_m1())
}

/// Second-order saddle-point moments of the plain model at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleMoments {
    pub t: usize,
    pub mean_log_z: f64,
    pub mean_log_z_limit: f64,
    pub var_log_z: f64,
    pub var_log_z_limit: f64,
    pub var_delta: f64,
    pub var_delta_limit: f64,
    pub sigma_inf_sq: f64,
}

fn regime(spec: &ProductionModelSpec) -> Result<(f64, f64)> {
    let sigma = spec
        .gaussian_sigma()
        .ok_or_else(|| Error::OutOfRegime("saddle-point forms need gaussian noise".into()))?;
    let g = spec.effective_drift();
    if g <= 0.0 {
        return Err(Error::OutOfRegime(format!("saddle-point forms need g > 0, got {g}")));
    }
    Ok((g, sigma))
}

/// Finite-`t` sums and their large-`t` limits. `var_delta` is the variance of
/// `z_{t+1} − z_t`.
pub fn saddle_moments(spec: &ProductionModelSpec, t: usize) -> Result<SaddleMoments> {
    let (g, sigma) = regime(spec)?;
    let s2 = sigma * sigma;
    let shift = t as f64 * spec.log_retention();
    let (mut lin, mut sq) = (0.0, 0.0);
    for i in 1..=t {
        let u = weight(g, i, t);
        lin += u - u * u;
        sq += u * u;
    }
    let mut dv = 0.0;
    for i in 1..=t + 1 {
        let d = weight(g, i, t) - weight(g, i, t + 1);
        dv += d * d;
    }
    let tf = t as f64;
    Ok(SaddleMoments {
        t,
        mean_log_z: log_z0(g, t) + 0.5 * s2 * lin + shift,
        mean_log_z_limit: g * (tf + 1.0) - g.exp_m1().ln() + s2 / (4.0 * g.sinh()) + shift,
        var_log_z: s2 * sq,
        var_log_z_limit: s2 * ((2.0 * g.exp() + 1.0) / -(2.0 * g).exp_m1() + tf),
        var_delta: s2 * dv,
        var_delta_limit: tanh_law(g, sigma),
        sigma_inf_sq: stationary_variance(g, sigma),
    })
}

/// Narrow-regime third and fourth cumulants of `Δz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaCumulants {
    /// `¾ g σ⁴`.
    pub c3: f64,
    /// `(g³/4)·c4(ρ_a)`.
    pub c4: f64,
    /// `c4(ρ_a)` as measured from the noise law.
    pub noise_c4: f64,
}

pub fn delta_cumulants(spec: &ProductionModelSpec) -> Result<DeltaCumulants> {
    let noise = spec.noise();
    let (var, c4) = noise
        .variance()
        .zip(noise.c4())
        .ok_or_else(|| Error::OutOfRegime("noise law has no finite cumulants".into()))?;
    let g = spec.effective_drift();
    Ok(DeltaCumulants { c3: 0.75 * g * var * var, c4: 0.25 * g.powi(3) * c4, noise_c4: c4 })
}

fn check_narrow(g: f64, sigma: f64) -> Result<()> {
    if !(g.is_finite() && sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::RejectedParameters(format!("need finite g and σ ≥ 0, got g={g}, σ={sigma}")));
    }
    Ok(())
}

/// Increment variance of the memoryless variant after `t` steps; affine in `t`.
pub fn memoryless_variance(g: f64, sigma: f64, t: f64) -> Result<f64> {
    check_narrow(g, sigma)?;
    let e = g.exp();
    let em1 = g.exp_m1();
    Ok(sigma * sigma * em1 * em1 * (2.0 + e + 2.0 * (e + 1.0) * t) / (e * (e + 1.0).powi(2)))
}

/// `2σ²(e^g − 1)²/(e^g(e^g + 1))`, the per-step growth of [`memoryless_variance`].
pub fn memoryless_slope(g: f64, sigma: f64) -> Result<f64> {
    check_narrow(g, sigma)?;
    let e = g.exp();
    Ok(2.0 * sigma * sigma * g.exp_m1().powi(2) / (e * (e + 1.0)))
}

/// `σ² tanh(g̃/2)` with `g̃ = g − ln(1 − d)`.
pub fn depreciation_volatility(g: f64, sigma: f64, d: f64) -> Result<f64> {
    check_narrow(g, sigma)?;
    if !(0.0..1.0).contains(&d) {
        return Err(Error::RejectedParameters(format!("depreciation rate must lie in [0, 1), got {d}")));
    }
    let gt = g - (-d).ln_1p();
    if gt <= 0.0 {
        return Err(Error::OutOfRegime(format!("effective drift {gt} is not positive")));
    }
    Ok(tanh_law(gt, sigma))
}

/// First-order form `σ² tanh((g + d)/2)`.
pub fn depreciation_volatility_small_d(g: f64, sigma: f64, d: f64) -> f64 {
    tanh_law(g + d, sigma)
}

/// `⟨Z_t⟩` and `⟨Z_t²⟩` of the plain model from `x = ⟨e^a⟩`, `y = ⟨e^{2a}⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductionMoments {
    pub mean: f64,
    pub second: f64,
}

impl ProductionMoments {
    pub fn variance(&self) -> f64 {
        self.second - self.mean * self.mean
    }
}

pub fn production_moments(g: f64, x: f64, y: f64, t: usize) -> ProductionMoments {
    let r = g.exp() * x;
    let q = (2.0 * g).exp() * y;
    // tail[m] = Σ_{k=1}^{m} r^k
    let mut tail = vec![0.0; t + 1];
    let mut p = 1.0;
    for m in 1..=t {
        p *= r;
        tail[m] = tail[m - 1] + p;
    }
    let (mut mean, mut second, mut qj) = (0.0, 0.0, 1.0);
    for j in 0..=t {
        mean += tail[j] - if j > 0 { tail[j - 1] } else { -1.0 };
        second += qj * (1.0 + 2.0 * tail[t - j]);
        qj *= q;
    }
    ProductionMoments { mean, second }
}

/// [`production_moments`] with `x, y` taken from the model's noise law.
pub fn model_moments(spec: &ProductionModelSpec, t: usize) -> Result<ProductionMoments> {
    let (x, y) = spec
        .noise()
        .exp_moments()
        .ok_or_else(|| Error::OutOfRegime("exponential moments of the noise diverge".into()))?;
    Ok(production_moments(spec.g(), x, y, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_without_noise() {
        let m = production_moments(0.3, 1.0, 1.0, 5);
        let z0: f64 = (0..=5).map(|i| (0.3 * i as f64).exp()).sum();
        assert!((m.mean - z0).abs() < 1e-12 * z0);
        assert!(m.variance().abs() < 1e-9 * z0 * z0);
    }

    #[test]
    fn log_z0_matches_direct_sum() {
        let direct: f64 = (0..=12).map(|i| (0.2 * i as f64).exp()).sum::<f64>().ln();
        assert!((log_z0(0.2, 12) - direct).abs() < 1e-12);
    }
}
