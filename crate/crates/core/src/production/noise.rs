use crate::error::{Error, Result};
use crate::numerics::{cumulants_of_grid, GridPdf};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Gaussian noise is cut at this many standard deviations.
pub const GAUSSIAN_CUTOFF: f64 = 10.0;
/// Lorentzian noise is cut at this many half-widths and renormalised.
pub const LORENTZIAN_CUTOFF: f64 = 50.0;

/// Law of the i.i.d. log-growth shocks `a_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseSpec {
    Gaussian { sigma: f64 },
    Lorentzian { gamma: f64 },
    Custom { pdf: GridPdf },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::RejectedParameters(msg.into())
}

impl NoiseSpec {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        let n = Self::Gaussian { sigma };
        n.validate()?;
        Ok(n)
    }

    pub fn lorentzian(gamma: f64) -> Result<Self> {
        let n = Self::Lorentzian { gamma };
        n.validate()?;
        Ok(n)
    }

    pub fn custom(pdf: GridPdf) -> Result<Self> {
        let n = Self::Custom { pdf };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Gaussian { sigma } if !(*sigma > 0.0 && sigma.is_finite()) => {
                Err(invalid(format!("gaussian sigma must be positive, got {sigma}")))
            }
            Self::Lorentzian { gamma } if !(*gamma > 0.0 && gamma.is_finite()) => {
                Err(invalid(format!("lorentzian gamma must be positive, got {gamma}")))
            }
            Self::Custom { pdf } => {
                let check = GridPdf::new(pdf.x0(), pdf.dx(), pdf.density().to_vec())?;
                if !check.is_normalized(1e-6) {
                    return Err(invalid(format!("custom noise density has mass {}", check.mass())));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Support after truncation.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Gaussian { sigma } => (-GAUSSIAN_CUTOFF * sigma, GAUSSIAN_CUTOFF * sigma),
            Self::Lorentzian { gamma } => (-LORENTZIAN_CUTOFF * gamma, LORENTZIAN_CUTOFF * gamma),
            Self::Custom { pdf } => (pdf.x0() - 0.5 * pdf.dx(), pdf.xmax() + 0.5 * pdf.dx()),
        }
    }

    /// Mass of the untruncated law lying outside [`support`](Self::support).
    pub fn truncated_mass(&self) -> f64 {
        match self {
            Self::Gaussian { .. } => erfc(GAUSSIAN_CUTOFF * FRAC_1_SQRT_2),
            Self::Lorentzian { .. } => 1.0 - 2.0 * LORENTZIAN_CUTOFF.atan() / PI,
            Self::Custom { .. } => 0.0,
        }
    }

    /// Untruncated mass of `[a, b]`, computed on whichever tail keeps precision.
    fn raw_interval(&self, a: f64, b: f64) -> f64 {
        match self {
            Self::Gaussian { sigma } => {
                let s = FRAC_1_SQRT_2 / sigma;
                if a >= 0.0 {
                    0.5 * (erfc(a * s) - erfc(b * s))
                } else if b <= 0.0 {
                    0.5 * (erfc(-b * s) - erfc(-a * s))
                } else {
                    1.0 - 0.5 * (erfc(b * s) + erfc(-a * s))
                }
            }
            Self::Lorentzian { gamma } => ((b / gamma).atan() - (a / gamma).atan()) / PI,
            Self::Custom { pdf } => pdf.cdf(b) - pdf.cdf(a),
        }
    }

    /// Truncated, renormalised CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        (self.raw_interval(lo, x) / self.raw_interval(lo, hi)).clamp(0.0, 1.0)
    }

    /// Truncated mass of `[a, b]`.
    pub fn interval_mass(&self, a: f64, b: f64) -> f64 {
        let (lo, hi) = self.support();
        let (a, b) = (a.max(lo), b.min(hi));
        if b <= a {
            return 0.0;
        }
        self.raw_interval(a, b) / self.raw_interval(lo, hi)
    }

    /// Cell masses on `[(j−½)dx, (j+½)dx]`, returned as `(j_min, masses)`.
    pub fn kernel_masses(&self, dx: f64) -> (i64, Vec<f64>) {
        let (lo, hi) = self.support();
        let j_min = (lo / dx + 0.5).floor() as i64;
        let j_max = (hi / dx - 0.5).ceil() as i64;
        let mut masses: Vec<f64> = (j_min..=j_max)
            .map(|j| self.interval_mass((j as f64 - 0.5) * dx, (j as f64 + 0.5) * dx))
            .collect();
        let total: f64 = masses.iter().sum();
        masses.iter_mut().for_each(|m| *m /= total);
        (j_min, masses)
    }

    /// The kernel as a grid density centred on multiples of `dx`.
    pub fn kernel_pdf(&self, dx: f64) -> Result<GridPdf> {
        let (j_min, masses) = self.kernel_masses(dx);
        GridPdf::from_masses(j_min as f64 * dx, dx, &masses)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Gaussian { sigma } => loop {
                let z: f64 = StandardNormal.sample(rng);
                if z.abs() <= GAUSSIAN_CUTOFF {
                    return sigma * z;
                }
            },
            Self::Lorentzian { gamma } => {
                let w = LORENTZIAN_CUTOFF.atan();
                let u: f64 = rng.random_range(-w..w);
                gamma * u.tan()
            }
            Self::Custom { pdf } => {
                let u: f64 = rng.random::<f64>() * pdf.mass();
                let mut acc = 0.0;
                for (i, d) in pdf.density().iter().enumerate() {
                    let m = d * pdf.dx();
                    if acc + m >= u && m > 0.0 {
                        return pdf.x(i) + pdf.dx() * ((u - acc) / m - 0.5);
                    }
                    acc += m;
                }
                pdf.xmax()
            }
        }
    }

    /// Variance of the untruncated law, `None` when it does not exist.
    pub fn variance(&self) -> Option<f64> {
        match self {
            Self::Gaussian { sigma } => Some(sigma * sigma),
            Self::Lorentzian { .. } => None,
            Self::Custom { pdf } => Some(pdf.variance()),
        }
    }

    /// Fourth cumulant, `None` for the Lorentzian.
    pub fn c4(&self) -> Option<f64> {
        match self {
            Self::Gaussian { .. } => Some(0.0),
            Self::Lorentzian { .. } => None,
            Self::Custom { pdf } => cumulants_of_grid(pdf).ok().map(|c| c.c4),
        }
    }

    /// `(⟨e^a⟩, ⟨e^{2a}⟩)`, `None` when they diverge.
    pub fn exp_moments(&self) -> Option<(f64, f64)> {
        match self {
            Self::Gaussian { sigma } => {
                let s2 = sigma * sigma;
                Some(((0.5 * s2).exp(), (2.0 * s2).exp()))
            }
            Self::Lorentzian { .. } => None,
            Self::Custom { pdf } => {
                let m = pdf.mass();
                let (mut x, mut y) = (0.0, 0.0);
                for (i, d) in pdf.density().iter().enumerate() {
                    let e = pdf.x(i).exp();
                    x += d * pdf.dx() * e;
                    y += d * pdf.dx() * e * e;
                }
                Some((x / m, y / m))
            }
        }
    }

    /// Default grid spacing for the density recursion.
    pub fn default_dx(&self) -> f64 {
        match self {
            Self::Gaussian { sigma } => (sigma / 25.0).min(0.005),
            Self::Lorentzian { gamma } => (gamma / 25.0).min(0.005),
            Self::Custom { pdf } => pdf.dx().min(0.005),
        }
    }
}
