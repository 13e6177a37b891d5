use super::{perron_derivatives, GameSpec, PerronDerivatives, TransferSystem};
use crate::error::{reject, Error, Result};
use serde::{Deserialize, Serialize};

const KAPPA_MAX: f64 = 64.0;

/// Legendre point: the tilt κ at which the mean velocity equals `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub x: f64,
    pub kappa: f64,
    /// `u(x) = ln λ(κ) + κ x ≤ 0`
    pub u: f64,
    /// `d² ln λ/dκ²` at the saddle.
    pub curvature: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

fn velocity(pd: &PerronDerivatives) -> f64 {
    -pd.log_d1()
}

fn solve_tilt(sys: &TransferSystem, x: f64) -> Result<PerronDerivatives> {
    let mut reach = 1.0;
    let (mut v_min, mut v_max) = (f64::NAN, f64::NAN);
    loop {
        match (perron_derivatives(sys, -reach), perron_derivatives(sys, reach)) {
            (Ok(a), Ok(b)) => {
                v_max = velocity(&a);
                v_min = velocity(&b);
                if x > v_min && x < v_max {
                    break;
                }
            }
            _ => return Err(Error::OutOfSupport { x, lo: v_min, hi: v_max }),
        }
        reach *= 2.0;
        if reach > KAPPA_MAX {
            return Err(Error::OutOfSupport { x, lo: v_min, hi: v_max });
        }
    }
    let (mut lo, mut hi) = (-reach, reach);
    let mut k = 0.0;
    for _ in 0..200 {
        let pd = perron_derivatives(sys, k)?;
        let h = velocity(&pd) - x;
        if h.abs() < 1e-13 {
            return Ok(pd);
        }
        if h > 0.0 {
            lo = k;
        } else {
            hi = k;
        }
        let slope = -pd.log_d2();
        let next = k - h / slope;
        k = if slope < 0.0 && next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-14 {
            return perron_derivatives(sys, k);
        }
    }
    Err(Error::NumericalFailure { detail: format!("tilt search for x = {x} did not converge"), residual: f64::NAN })
}

/// Large-deviation rate `u(x)` for the cell velocity `x = n/t`.
pub fn rate_function(spec: &GameSpec, x: f64) -> Result<RatePoint> {
    let sys = TransferSystem::from_game(spec);
    let pd = solve_tilt(&sys, x)?;
    Ok(RatePoint {
        x,
        kappa: pd.kappa,
        u: pd.lambda.ln() + pd.kappa * x,
        curvature: pd.log_d2(),
        right: pd.right,
        left: pd.left,
    })
}

/// Closed form of the chain rate function when `q = 1 − p`.
pub fn binary_entropy_rate(p: f64, x: f64) -> f64 {
    let q = 1.0 - p;
    let term = |w: f64, prob: f64| if w == 0.0 { 0.0 } else { w * (w / prob).ln() };
    -(term((1.0 + x) / 2.0, p) + term((1.0 - x) / 2.0, q))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub n: i64,
    pub x: f64,
    pub kappa: f64,
    pub u: f64,
    /// Saddle estimate of `P_l(n, t)` per rung.
    pub per_rung: Vec<f64>,
    /// Rung sum `P̂(n, t)`.
    pub mass: f64,
    /// `t · P̂(n, t)`, a density in `x`.
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticProfile {
    pub t: usize,
    pub m: usize,
    pub points: Vec<ProfilePoint>,
}

/// Saddle-point profile `e^{t u(x)} / √(2π t V'')` for every cell with `n/t` in
/// `[x_lo, x_hi]`.
///
/// Without holding, the parity-forbidden sites get zero and the allowed ones
/// twice the smooth value, which is the ±1 branch pair with equal weights for a
/// point start.
pub fn asymptotic_profile(spec: &GameSpec, t: usize, x_lo: f64, x_hi: f64) -> Result<AsymptoticProfile> {
    if t == 0 || !(x_lo <= x_hi) {
        return reject("need t >= 1 and x_lo <= x_hi");
    }
    let sys = TransferSystem::from_game(spec);
    let m = spec.m();
    let holdless = spec.is_holdless();
    let tf = t as f64;
    let n_lo = (x_lo * tf).ceil() as i64;
    let n_hi = (x_hi * tf).floor() as i64;
    let mut points = Vec::new();
    for n in n_lo..=n_hi {
        let x = n as f64 / tf;
        let pd = solve_tilt(&sys, x)?;
        let u = pd.lambda.ln() + pd.kappa * x;
        let base = (tf * u).exp() / (2.0 * std::f64::consts::PI * tf * pd.log_d2()).sqrt();
        let per_rung: Vec<f64> = (0..m)
            .map(|l| {
                let parity = if holdless {
                    let s = l as i64 + n * m as i64 + t as i64;
                    if s.rem_euclid(2) == 0 {
                        2.0
                    } else {
                        0.0
                    }
                } else {
                    1.0
                };
                parity * pd.right[l] * pd.left[0] * base
            })
            .collect();
        let mass: f64 = per_rung.iter().sum();
        points.push(ProfilePoint { n, x, kappa: pd.kappa, u, per_rung, mass, density: tf * mass });
    }
    Ok(AsymptoticProfile { t, m, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parrondo::exact_pmf;

    #[test]
    fn binary_entropy_matches() {
        let g = GameSpec::chain(0.6, 0.4).unwrap();
        for &x in &[-0.8, -0.3, 0.0, 0.2, 0.5, 0.95] {
            let rp = rate_function(&g, x).unwrap();
            assert!((rp.u - binary_entropy_rate(0.6, x)).abs() < 1e-10, "x={x}");
        }
        assert!(rate_function(&g, 0.2).unwrap().u.abs() < 1e-13);
    }

    #[test]
    fn out_of_support() {
        let g = GameSpec::chain(0.6, 0.4).unwrap();
        assert!(matches!(rate_function(&g, 1.2), Err(Error::OutOfSupport { .. })));
    }

    #[test]
    fn peak_against_exact() {
        let g = GameSpec::chain(0.6, 0.4).unwrap();
        let t = 400;
        let exact = exact_pmf(&g, t);
        let prof = asymptotic_profile(&g, t, 0.19, 0.21).unwrap();
        for p in &prof.points {
            let e = exact.get(p.n, 0);
            if e > 0.0 {
                assert!((p.mass / e - 1.0).abs() < 0.02, "n={} {} {}", p.n, p.mass, e);
            } else {
                assert_eq!(p.mass, 0.0);
            }
        }
    }
}
