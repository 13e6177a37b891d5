use super::model::ProductionModelSpec;
use crate::error::{reject, Result};
use crate::sharding::{map_shards, shard_rng};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Monte-Carlo samples of `z_t = log Z_t` and `Δz_t = z_t − z_{t−1}` at the
/// requested times. `Δz_0` is recorded as NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSamples {
    pub times: Vec<usize>,
    pub log_z: Vec<Vec<f64>>,
    pub delta: Vec<Vec<f64>>,
}

impl PathSamples {
    pub fn at(&self, t: usize) -> Option<(&[f64], &[f64])> {
        let i = self.times.iter().position(|&s| s == t)?;
        Some((&self.log_z[i], &self.delta[i]))
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Advances one path in place: `log Q += g + a`, `Z ← (1−d)Z + Q`.
#[inline]
fn step(z: &mut f64, lq: &mut f64, g: f64, retention: f64, a: f64) -> f64 {
    *lq += g + a;
    let next = log_add_exp(*z + retention, *lq);
    let delta = next - *z;
    *z = next;
    delta
}

/// Simulates `n_paths` independent paths, recording the state at each time in
/// `times`. Paths are sharded as in [`crate::sharding`].
pub fn simulate_paths(
    spec: &ProductionModelSpec,
    times: &[usize],
    n_paths: usize,
    seed: u64,
) -> Result<PathSamples> {
    if n_paths == 0 {
        return reject("n_paths must be at least 1");
    }
    let mut sorted = times.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let t_max = sorted.last().copied().unwrap_or(0);
    let (g, ret) = (spec.g(), spec.log_retention());
    let noise = spec.noise();
    let shards = map_shards(n_paths, seed, |_, len, rng| {
        let mut zs = vec![Vec::with_capacity(len); sorted.len()];
        let mut ds = vec![Vec::with_capacity(len); sorted.len()];
        for _ in 0..len {
            let (mut z, mut lq, mut delta) = (0.0, 0.0, f64::NAN);
            let mut next = 0;
            for t in 0..=t_max {
                if t > 0 {
                    delta = step(&mut z, &mut lq, g, ret, noise.sample(rng));
                }
                if next < sorted.len() && sorted[next] == t {
                    zs[next].push(z);
                    ds[next].push(delta);
                    next += 1;
                }
            }
        }
        (zs, ds)
    });
    let mut log_z = vec![Vec::with_capacity(n_paths); sorted.len()];
    let mut delta = vec![Vec::with_capacity(n_paths); sorted.len()];
    for (zs, ds) in shards {
        for (k, (z, d)) in zs.into_iter().zip(ds).enumerate() {
            log_z[k].extend(z);
            delta[k].extend(d);
        }
    }
    Ok(PathSamples { times: sorted, log_z, delta })
}

/// One path `z_0, …, z_{t_max}` drawn from `seed`.
pub fn sample_path(spec: &ProductionModelSpec, t_max: usize, seed: u64) -> Vec<f64> {
    let mut rng = shard_rng(seed, 0);
    let (mut z, mut lq) = (0.0, 0.0);
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(0.0);
    for _ in 0..t_max {
        step(&mut z, &mut lq, spec.g(), spec.log_retention(), spec.noise().sample(&mut rng));
        out.push(z);
    }
    out
}

/// Sample variance of `Δz = z_{t+1} − z_t` in the memoryless variant
/// `Z_t = Σ_{j≤t} e^{g·j + b_j}` with independent `b_j ~ N(0, σ²·j)`.
pub fn simulate_memoryless(g: f64, sigma: f64, t: usize, n_paths: usize, seed: u64) -> Result<f64> {
    if n_paths < 2 {
        return reject("need at least two paths for a variance");
    }
    if !(sigma >= 0.0 && sigma.is_finite() && g.is_finite()) {
        return reject("drift and noise width must be finite, width non-negative");
    }
    let parts = map_shards(n_paths, seed, |_, len, rng| {
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..len {
            let mut z = 0.0;
            let mut prev = 0.0;
            for j in 1..=t + 1 {
                let u: f64 = StandardNormal.sample(rng);
                let y = g * j as f64 + sigma * (j as f64).sqrt() * u;
                prev = z;
                z = log_add_exp(z, y);
            }
            let d = z - prev;
            s1 += d;
            s2 += d * d;
        }
        (s1, s2)
    });
    let (s1, s2) = parts.into_iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = n_paths as f64;
    Ok((s2 - s1 * s1 / n) / (n - 1.0))
}
