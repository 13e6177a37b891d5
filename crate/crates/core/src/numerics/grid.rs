use crate::error::{reject, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// A density sampled on a uniform grid.
///
/// Node `i` sits at `x0 + i·dx` and represents the cell `[x_i − dx/2, x_i + dx/2]`;
/// integrals use the midpoint rule `Σ density_i · dx`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPdf {
    x0: f64,
    dx: f64,
    density: Vec<f64>,
}

impl GridPdf {
    pub fn new(x0: f64, dx: f64, density: Vec<f64>) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return reject(format!("grid spacing must be positive, got {dx}"));
        }
        if !x0.is_finite() {
            return reject("grid origin must be finite");
        }
        if density.is_empty() {
            return reject("empty grid");
        }
        if let Some(v) = density.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return reject(format!("density values must be finite and non-negative, found {v}"));
        }
        Ok(Self { x0, dx, density })
    }

    pub fn from_fn(x0: f64, dx: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let density = (0..n).map(|i| f(x0 + i as f64 * dx)).collect();
        Self::new(x0, dx, density)
    }

    /// Cell masses turned into a density on the same grid.
    pub fn from_masses(x0: f64, dx: f64, masses: &[f64]) -> Result<Self> {
        Self::new(x0, dx, masses.iter().map(|m| m / dx).collect())
    }

    /// A single cell of unit mass centred on `x`.
    pub fn spike(x: f64, dx: f64) -> Result<Self> {
        Self::new(x, dx, vec![1.0 / dx])
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn len(&self) -> usize {
        self.density.len()
    }

    pub fn is_empty(&self) -> bool {
        self.density.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn xmax(&self) -> f64 {
        self.x(self.len() - 1)
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn masses(&self) -> Vec<f64> {
        self.density.iter().map(|d| d * self.dx).collect()
    }

    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.dx
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.mass() - 1.0).abs() <= tol
    }

    pub fn normalized(mut self) -> Result<Self> {
        let m = self.mass();
        if !(m > 0.0) {
            return reject("cannot normalise a grid with zero mass");
        }
        self.density.iter_mut().for_each(|d| *d /= m);
        Ok(self)
    }

    pub fn mean(&self) -> f64 {
        let m = self.mass();
        self.density.iter().enumerate().map(|(i, d)| d * self.x(i)).sum::<f64>() * self.dx / m
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        let m = self.mass();
        self.density
            .iter()
            .enumerate()
            .map(|(i, d)| d * (self.x(i) - mu).powi(2))
            .sum::<f64>()
            * self.dx
            / m
    }

    /// Piecewise-linear CDF: each cell's mass is spread uniformly over the cell.
    pub fn cdf(&self, x: f64) -> f64 {
        let lo = self.x0 - 0.5 * self.dx;
        let u = (x - lo) / self.dx;
        if u <= 0.0 {
            return 0.0;
        }
        let k = u.floor() as usize;
        let full: f64 = self.density[..k.min(self.len())].iter().sum::<f64>() * self.dx;
        if k >= self.len() {
            return full;
        }
        full + self.density[k] * self.dx * (u - k as f64)
    }

    /// Linear interpolation of the density at `x`, zero outside the node span.
    pub fn interpolate(&self, x: f64) -> f64 {
        let u = (x - self.x0) / self.dx;
        if u < 0.0 || u > (self.len() - 1) as f64 {
            return 0.0;
        }
        let k = u.floor() as usize;
        if k + 1 >= self.len() {
            return self.density[self.len() - 1];
        }
        let w = u - k as f64;
        self.density[k] * (1.0 - w) + self.density[k + 1] * w
    }

    /// Linear-interpolation resample onto spacing `dx` over the same span.
    pub fn resample(&self, dx: f64) -> Result<Self> {
        if !(dx > 0.0) {
            return reject("resample spacing must be positive");
        }
        let span = self.xmax() - self.x0;
        let n = (span / dx + 1e-9).floor() as usize + 1;
        let out = Self::from_fn(self.x0, dx, n, |x| self.interpolate(x))?;
        if out.mass() > 0.0 {
            let scale = self.mass() / out.mass();
            Self::new(out.x0, dx, out.density.iter().map(|d| d * scale).collect())
        } else {
            Ok(out)
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["x", "density"])?;
        for (i, d) in self.density.iter().enumerate() {
            wtr.write_record([format!("{:.12e}", self.x(i)), format!("{:.12e}", d)])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut xs = Vec::new();
        let mut ds = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |k: usize| -> Result<f64> {
                rec.get(k).and_then(|s| s.trim().parse().ok()).ok_or(crate::Error::Parse {
                    line: line + 2,
                    msg: "expected two numeric columns x,density".into(),
                })
            };
            xs.push(parse(0)?);
            ds.push(parse(1)?);
        }
        if xs.len() < 2 {
            return reject("grid CSV needs at least two rows");
        }
        let dx = xs[1] - xs[0];
        for w in xs.windows(2) {
            if ((w[1] - w[0]) - dx).abs() > 1e-9 * dx.abs().max(1.0) {
                return reject("grid CSV is not uniformly spaced");
            }
        }
        Self::new(xs[0], dx, ds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(GridPdf::new(0.0, 0.0, vec![1.0]).is_err());
        assert!(GridPdf::new(0.0, 0.1, vec![]).is_err());
        assert!(GridPdf::new(0.0, 0.1, vec![-1.0]).is_err());
        assert!(GridPdf::new(0.0, 0.1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn cdf_is_piecewise_linear() {
        let g = GridPdf::new(0.5, 1.0, vec![0.25, 0.75]).unwrap();
        assert_eq!(g.cdf(0.0), 0.0);
        assert!((g.cdf(0.5) - 0.125).abs() < 1e-15);
        assert!((g.cdf(1.0) - 0.25).abs() < 1e-15);
        assert!((g.cdf(1.5) - 0.625).abs() < 1e-15);
        assert_eq!(g.cdf(5.0), 1.0);
    }

    #[test]
    fn csv_round_trip() {
        let g = GridPdf::from_fn(-1.0, 0.25, 9, |x| (-x * x).exp()).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("x,density"));
        let h = GridPdf::read_csv(buf.as_slice()).unwrap();
        assert_eq!(h.len(), g.len());
        for (a, b) in g.density().iter().zip(h.density()) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn resample_keeps_mass() {
        let g = GridPdf::from_fn(-5.0, 0.1, 101, |x| (-x * x / 2.0).exp()).unwrap().normalized().unwrap();
        let h = g.resample(0.05).unwrap();
        assert!((h.mass() - 1.0).abs() < 1e-12);
        assert!((h.variance() - 1.0).abs() < 2e-3);
    }
}
