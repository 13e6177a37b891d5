use super::GameSpec;
use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Masses `P_l(n, t)` on cells `n ≥ n_min` and rungs `l < M`; capital is `nM + l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDistribution {
    t: usize,
    m: usize,
    n_min: i64,
    masses: Vec<f64>,
}

impl LatticeDistribution {
    /// All mass on cell 0, rung 0.
    pub fn point(m: usize) -> Self {
        let mut masses = vec![0.0; m];
        masses[0] = 1.0;
        Self { t: 0, m, n_min: 0, masses }
    }

    pub(crate) fn from_parts(t: usize, m: usize, n_min: i64, masses: Vec<f64>) -> Self {
        debug_assert_eq!(masses.len() % m, 0);
        Self { t, m, n_min, masses }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.cells() as i64 - 1
    }

    pub fn cells(&self) -> usize {
        self.masses.len() / self.m
    }

    pub fn raw(&self) -> &[f64] {
        &self.masses
    }

    pub fn get(&self, n: i64, l: usize) -> f64 {
        if n < self.n_min || n > self.n_max() {
            return 0.0;
        }
        self.masses[(n - self.n_min) as usize * self.m + l]
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Rung-summed masses `P̂(n, t)` for `n = n_min..=n_max`.
    pub fn summed(&self) -> Vec<f64> {
        self.masses.chunks(self.m).map(|c| c.iter().sum()).collect()
    }

    /// Cell with the largest rung-summed mass (lowest index on ties).
    pub fn argmax_cell(&self) -> i64 {
        let s = self.summed();
        let mut best = 0;
        for (i, v) in s.iter().enumerate() {
            if *v > s[best] {
                best = i;
            }
        }
        self.n_min + best as i64
    }

    /// Mean and variance of the cell index.
    pub fn cell_moments(&self) -> (f64, f64) {
        let s = self.summed();
        let tot: f64 = s.iter().sum();
        let mean = s.iter().enumerate().map(|(i, w)| w * (self.n_min + i as i64) as f64).sum::<f64>() / tot;
        let var = s.iter().enumerate().map(|(i, w)| w * ((self.n_min + i as i64) as f64 - mean).powi(2)).sum::<f64>()
            / tot;
        (mean, var)
    }

    /// Largest per-entry difference, aligning the two supports.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        let lo = self.n_min.min(other.n_min);
        let hi = self.n_max().max(other.n_max());
        let mut d: f64 = 0.0;
        for n in lo..=hi {
            for l in 0..self.m.max(other.m) {
                let a = if l < self.m { self.get(n, l) } else { 0.0 };
                let b = if l < other.m { other.get(n, l) } else { 0.0 };
                d = d.max((a - b).abs());
            }
        }
        d
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["n", "l", "mass"])?;
        for (i, c) in self.masses.chunks(self.m).enumerate() {
            for (l, v) in c.iter().enumerate() {
                wtr.write_record([(self.n_min + i as i64).to_string(), l.to_string(), format!("{v:.15e}")])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// One step of the ladder master equation; the support grows by one cell per side.
pub fn ladder_step(dist: &LatticeDistribution, spec: &GameSpec) -> LatticeDistribution {
    let m = spec.m();
    assert_eq!(m, dist.m, "rung count mismatch");
    let cells = dist.cells() + 2;
    let mut out = vec![0.0; cells * m];
    for (i, c) in dist.masses.chunks(m).enumerate() {
        let base = (i + 1) * m;
        for (l, &w) in c.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            out[base + l] += w * spec.hold(l);
            out[base + l + 1] += w * spec.p()[l];
            out[base + l - 1] += w * spec.q()[l];
        }
    }
    LatticeDistribution { t: dist.t + 1, m, n_min: dist.n_min - 1, masses: out }
}

/// Single-rung special case of [`ladder_step`].
pub fn chain_step(dist: &LatticeDistribution, spec: &GameSpec) -> LatticeDistribution {
    ladder_step(dist, spec)
}

/// `t` master-equation steps from the point start.
pub fn iterate(spec: &GameSpec, t: usize) -> LatticeDistribution {
    let mut d = LatticeDistribution::point(spec.m());
    for _ in 0..t {
        d = ladder_step(&d, spec);
    }
    d
}
