use super::noise::NoiseSpec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Cumulative production `Z_t = Σ_{j≤t} (1−d)^{t−j} Q_j` with
/// `log Q_j = g·j + a_1 + … + a_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductionModelSpec {
    g: f64,
    noise: NoiseSpec,
    #[serde(default)]
    d: f64,
}

impl ProductionModelSpec {
    pub fn new(g: f64, noise: NoiseSpec, d: f64) -> Result<Self> {
        let s = Self { g, noise, d };
        s.validate()?;
        Ok(s)
    }

    pub fn gaussian(g: f64, sigma: f64) -> Result<Self> {
        Self::new(g, NoiseSpec::gaussian(sigma)?, 0.0)
    }

    pub fn lorentzian(g: f64, gamma: f64) -> Result<Self> {
        Self::new(g, NoiseSpec::lorentzian(gamma)?, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.g.is_finite() {
            return Err(Error::RejectedParameters(format!("drift must be finite, got {}", self.g)));
        }
        if !(0.0..1.0).contains(&self.d) {
            return Err(Error::RejectedParameters(format!(
                "depreciation rate must lie in [0, 1), got {}",
                self.d
            )));
        }
        self.noise.validate()
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let spec: Self = toml::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn noise(&self) -> &NoiseSpec {
        &self.noise
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// `g − ln(1−d)`, the drift of the equivalent undepreciated model.
    pub fn effective_drift(&self) -> f64 {
        self.g - (-self.d).ln_1p()
    }

    /// `ln(1−d)`, the per-step offset between the two frames.
    pub fn log_retention(&self) -> f64 {
        (-self.d).ln_1p()
    }

    /// The noise width when it is Gaussian.
    pub fn gaussian_sigma(&self) -> Option<f64> {
        match self.noise {
            NoiseSpec::Gaussian { sigma } => Some(sigma),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let s = ProductionModelSpec::from_toml_str(
            "g = 0.2\nd = 0.05\nnoise = { kind = \"gaussian\", sigma = 0.1 }\n",
        )
        .unwrap();
        assert_eq!(s.gaussian_sigma(), Some(0.1));
        assert!((s.effective_drift() - 0.251293).abs() < 1e-6);
        assert!(ProductionModelSpec::from_toml_str("g = 0.2\nnoise = { kind = \"gaussian\", sigma = 0.1 }\nx = 1\n").is_err());
    }

    #[test]
    fn rejects_full_depreciation() {
        let n = NoiseSpec::gaussian(0.1).unwrap();
        assert!(matches!(
            ProductionModelSpec::new(0.2, n, 1.0),
            Err(Error::RejectedParameters(_))
        ));
    }
}
