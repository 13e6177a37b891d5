use crate::error::{reject, Result};
use serde::{Deserialize, Serialize};

const NORM_TOL: f64 = 1e-12;

fn validate(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return reject("empty distribution");
    }
    if p.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return reject("probabilities must be finite and non-negative");
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > NORM_TOL {
        return reject(format!("probabilities sum to {s}, not 1"));
    }
    Ok(())
}

/// Shannon entropy in nats with `0 ln 0 = 0`.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>()
}

/// `D(p‖q)`; infinite when q vanishes where p does not.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return reject("KL supports differ in size");
    }
    validate(p)?;
    validate(q)?;
    let mut d = 0.0;
    for (a, b) in p.iter().zip(q) {
        if *a > 0.0 {
            if *b == 0.0 {
                return Ok(f64::INFINITY);
            }
            d += a * (a / b).ln();
        }
    }
    Ok(d.max(0.0))
}

/// Joint probabilities on an `rows × cols` support, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteJoint {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
}

impl DiscreteJoint {
    pub fn new(rows: usize, cols: usize, p: Vec<f64>) -> Result<Self> {
        if rows * cols != p.len() || rows == 0 || cols == 0 {
            return reject(format!("{} probabilities do not fill a {rows}x{cols} table", p.len()));
        }
        validate(&p)?;
        Ok(Self { rows, cols, p })
    }

    /// Normalises non-negative counts.
    pub fn from_counts(rows: usize, cols: usize, counts: &[f64]) -> Result<Self> {
        let s: f64 = counts.iter().sum();
        if !(s > 0.0) {
            return reject("counts sum to zero");
        }
        Self::new(rows, cols, counts.iter().map(|c| c / s).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.cols + j]
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        self.p.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn transposed(&self) -> Self {
        let p = (0..self.cols).flat_map(|j| (0..self.rows).map(move |i| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        Self { rows: self.cols, cols: self.rows, p }
    }

    pub fn mutual_information(&self) -> f64 {
        let (px, py) = (self.marginal_x(), self.marginal_y());
        let mut mi = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v > 0.0 {
                    mi += v * (v / (px[i] * py[j])).ln();
                }
            }
        }
        mi.max(0.0)
    }
}

/// Joint probabilities over `(X, Y, Z)`, row-major in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteJoint3 {
    dims: [usize; 3],
    p: Vec<f64>,
}

impl DiscreteJoint3 {
    pub fn new(dims: [usize; 3], p: Vec<f64>) -> Result<Self> {
        if dims.iter().product::<usize>() != p.len() || dims.contains(&0) {
            return reject("probabilities do not fill the three-way table");
        }
        validate(&p)?;
        Ok(Self { dims, p })
    }

    /// `I(X;Y|Z) = I(X;(Y,Z)) − I(X;Z)`.
    pub fn conditional_mi(&self) -> f64 {
        let [nx, ny, nz] = self.dims;
        let x_yz = DiscreteJoint { rows: nx, cols: ny * nz, p: self.p.clone() };
        let mut xz = vec![0.0; nx * nz];
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    xz[i * nz + k] += self.p[(i * ny + j) * nz + k];
                }
            }
        }
        let x_z = DiscreteJoint { rows: nx, cols: nz, p: xz };
        (x_yz.mutual_information() - x_z.mutual_information()).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InformationMeasures {
    pub h_x: f64,
    pub h_y: f64,
    pub h_xy: f64,
    pub h_x_given_y: f64,
    pub h_y_given_x: f64,
    pub mi: f64,
    /// `D(p‖q)` when a reference joint `q` was supplied.
    pub kl: Option<f64>,
}

pub fn information_measures(j: &DiscreteJoint, q: Option<&DiscreteJoint>) -> Result<InformationMeasures> {
    let h_x = entropy(&j.marginal_x());
    let h_y = entropy(&j.marginal_y());
    let h_xy = entropy(&j.p);
    let kl = match q {
        Some(q) => {
            if (q.rows, q.cols) != (j.rows, j.cols) {
                return reject("reference joint has a different support");
            }
            Some(kl_divergence(&j.p, &q.p)?)
        }
        None => None,
    };
    Ok(InformationMeasures {
        h_x,
        h_y,
        h_xy,
        h_x_given_y: (h_xy - h_y).max(0.0),
        h_y_given_x: (h_xy - h_x).max(0.0),
        mi: j.mutual_information(),
        kl,
    })
}
