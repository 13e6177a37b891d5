use super::rates::rates_of_system;
use super::{HistoryGameSpec, ParityClass, RateVariance, TransferSystem};
use crate::error::{reject, Result};
use crate::sharding::map_shards;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Drift and diffusion of a walk whose jump law depends on its last two moves.
pub fn history_rate_variance(spec: &HistoryGameSpec) -> Result<RateVariance> {
    rates_of_system(&TransferSystem::from_history(spec), 1, ParityClass::OddM)
}

/// Monte-Carlo drift per step with its standard error over independent walks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryDrift {
    pub drift: f64,
    pub stderr: f64,
    pub walks: usize,
    pub steps: usize,
}

/// Runs `walks` walks of `steps` moves, each from a uniformly drawn history.
pub fn simulate_history(spec: &HistoryGameSpec, walks: usize, steps: usize, seed: u64) -> Result<HistoryDrift> {
    if walks < 2 || steps < 1 {
        return reject("need at least two walks of at least one step");
    }
    let p = spec.probs();
    let per_shard = map_shards(walks, seed, |_, len, rng| {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let mut state: usize = rng.random_range(0..4);
            let mut pos: i64 = 0;
            for _ in 0..steps {
                let win = rng.random::<f64>() < p[state];
                pos += if win { 1 } else { -1 };
                state = 2 * (state & 1) + usize::from(win);
            }
            out.push(pos as f64 / steps as f64);
        }
        out
    });
    let v: Vec<f64> = per_shard.into_iter().flatten().collect();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(HistoryDrift { drift: mean, stderr: (var / n).sqrt(), walks, steps })
}
