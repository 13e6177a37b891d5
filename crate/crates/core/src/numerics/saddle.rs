use super::{derivative1, derivative2};
use crate::error::{reject, Error, Result};
use serde::{Deserialize, Serialize};

/// Laplace estimate of `∫ f(z) e^{k φ(z)} dz` around the interior maximiser of φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddlePoint {
    pub z: f64,
    pub phi: f64,
    pub phi2: f64,
    /// `ln f(z*) + k φ(z*) + ½ ln(2π / (−k φ''(z*)))`
    pub log_estimate: f64,
    pub iterations: usize,
}

/// Safeguarded Newton search for φ'(z) = 0 inside `bracket`, derivatives by
/// stencil.
pub fn saddle_point_estimate(
    phi: impl Fn(f64) -> f64,
    ln_f: impl Fn(f64) -> f64,
    k: f64,
    bracket: (f64, f64),
) -> Result<SaddlePoint> {
    if !(k > 0.0) {
        return reject(format!("k must be positive, got {k}"));
    }
    let (mut lo, mut hi) = if bracket.0 < bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let d1 = |z: f64| derivative1(&phi, z, 1e-4 * z.abs().max(1.0));
    let d2 = |z: f64| derivative2(&phi, z, 1e-3 * z.abs().max(1.0));
    let (dlo, dhi) = (d1(lo), d1(hi));
    if dlo.signum() == dhi.signum() || dlo == 0.0 && dhi == 0.0 {
        return Err(Error::SaddleNotFound(format!(
            "phi' has no sign change on [{lo}, {hi}] ({dlo:e}, {dhi:e})"
        )));
    }
    let rising_at_lo = dlo > 0.0;
    let mut z = 0.5 * (lo + hi);
    let mut iterations = 0;
    loop {
        iterations += 1;
        let d = d1(z);
        if d.abs() < 1e-10 {
            break;
        }
        if (d > 0.0) == rising_at_lo {
            lo = z;
        } else {
            hi = z;
        }
        if hi - lo <= 4.0 * f64::EPSILON * z.abs().max(1.0) {
            break;
        }
        if iterations > 200 {
            return Err(Error::NumericalFailure {
                detail: "saddle search did not converge".into(),
                residual: d.abs(),
            });
        }
        let c = d2(z);
        let newton = z - d / c;
        z = if c != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    let phi2 = d2(z);
    if !(phi2 < 0.0) {
        return Err(Error::InvalidSaddle { z, phi2 });
    }
    let p = phi(z);
    let log_estimate = ln_f(z) + k * p + 0.5 * (2.0 * std::f64::consts::PI / (-k * phi2)).ln();
    Ok(SaddlePoint { z, phi: p, phi2, log_estimate, iterations })
}
