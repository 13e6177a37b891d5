use super::GridPdf;
use crate::error::{reject, Result};
use serde::{Deserialize, Serialize};

/// First four cumulants with the standardised shape ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CumulantSet {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

impl CumulantSet {
    fn from_central(mean: f64, m2: f64, m3: f64, m4: f64) -> Self {
        let c2 = m2.max(0.0);
        let c4 = m4 - 3.0 * m2 * m2;
        let (skewness, excess_kurtosis) = if c2 > 0.0 {
            (m3 / c2.powf(1.5), c4 / (c2 * c2))
        } else {
            (0.0, 0.0)
        };
        Self { c1: mean, c2, c3: m3, c4, skewness, excess_kurtosis }
    }
}

/// Plug-in cumulants of a sample (central moments with denominator N).
pub fn cumulants_of_samples(xs: &[f64]) -> Result<CumulantSet> {
    if xs.len() < 4 {
        return Err(crate::Error::InsufficientData { needed: 4, got: xs.len() });
    }
    if xs.iter().any(|v| !v.is_finite()) {
        return reject("samples must be finite");
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    Ok(CumulantSet::from_central(mean, m2 / n, m3 / n, m4 / n))
}

/// Cumulants of point masses `masses[i]` placed at `x0 + i·dx`.
pub fn cumulants_from_masses(x0: f64, dx: f64, masses: &[f64]) -> CumulantSet {
    let total: f64 = masses.iter().sum();
    let mean = masses.iter().enumerate().map(|(i, m)| m * (x0 + i as f64 * dx)).sum::<f64>() / total;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for (i, &m) in masses.iter().enumerate() {
        let d = x0 + i as f64 * dx - mean;
        let d2 = d * d;
        m2 += m * d2;
        m3 += m * d2 * d;
        m4 += m * d2 * d2;
    }
    CumulantSet::from_central(mean, m2 / total, m3 / total, m4 / total)
}

/// Cumulants of a normalised grid density, nodes treated as point masses.
pub fn cumulants_of_grid(g: &GridPdf) -> Result<CumulantSet> {
    if !g.is_normalized(1e-6) {
        return reject(format!("grid is not normalised (mass {})", g.mass()));
    }
    Ok(cumulants_from_masses(g.x0(), g.dx(), &g.masses()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli() {
        let g = GridPdf::new(0.0, 1.0, vec![0.7, 0.3]).unwrap();
        let c = cumulants_of_grid(&g).unwrap();
        assert!((c.c1 - 0.3).abs() < 1e-15);
        assert!((c.c2 - 0.21).abs() < 1e-15);
        assert!((c.c3 - 0.084).abs() < 1e-15);
        // direct fourth cumulant of a Bernoulli: p q (1 - 6 p q)
        assert!((c.c4 - 0.21 * (1.0 - 6.0 * 0.21)).abs() < 1e-15);
    }

    #[test]
    fn delta_is_all_zero() {
        let c = cumulants_of_grid(&GridPdf::spike(0.0, 0.1).unwrap()).unwrap();
        assert_eq!((c.c1, c.c2, c.c3, c.c4), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn gaussian_grid() {
        let s = 0.5;
        let g = GridPdf::from_fn(2.0 - 10.0 * s, 0.001, 10_001, |x| (-(x - 2.0f64).powi(2) / (2.0 * s * s)).exp())
            .unwrap()
            .normalized()
            .unwrap();
        let c = cumulants_of_grid(&g).unwrap();
        assert!((c.c1 - 2.0).abs() < 1e-10);
        assert!((c.c2 - 0.25).abs() < 1e-9);
        assert!(c.c3.abs() < 1e-10);
        assert!(c.c4.abs() < 1e-9);
    }

    #[test]
    fn unnormalized_rejected() {
        let g = GridPdf::new(0.0, 1.0, vec![0.5, 0.3]).unwrap();
        assert!(cumulants_of_grid(&g).is_err());
    }

    #[test]
    fn samples_need_four() {
        assert!(cumulants_of_samples(&[1.0, 2.0, 3.0]).is_err());
        let c = cumulants_of_samples(&[0.0, 0.0, 1.0, 1.0]).unwrap();
        assert!((c.c2 - 0.25).abs() < 1e-15);
        assert!((c.c4 + 0.125).abs() < 1e-15);
    }
}
