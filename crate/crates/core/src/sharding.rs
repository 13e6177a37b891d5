//! Deterministic Monte-Carlo sharding.
//!
//! Work of `n` paths is cut into fixed shards of [`SHARD_SIZE`] paths. Shard `i`
//! draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream `i`, so the
//! result depends only on `(seed, n)` and never on the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::OnceLock;

pub const SHARD_SIZE: usize = 4096;

pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Thread cap from `STOCHLAB_THREADS`, falling back to the rayon default.
pub fn thread_count() -> usize {
    std::env::var("STOCHLAB_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(thread_count())
            .build()
            .expect("thread pool")
    })
}

/// Runs `f(first_path, len, rng)` over every shard and returns the per-shard
/// outputs in shard order.
pub fn map_shards<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, usize, &mut ChaCha8Rng) -> T + Sync,
{
    let shards = n.div_ceil(SHARD_SIZE);
    pool().install(|| {
        (0..shards)
            .into_par_iter()
            .map(|i| {
                let start = i * SHARD_SIZE;
                let len = SHARD_SIZE.min(n - start);
                let mut rng = shard_rng(seed, i as u64);
                f(start, len, &mut rng)
            })
            .collect()
    })
}

/// Runs `f` over independent parameter points on the shared pool.
pub fn par_map<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync,
{
    pool().install(|| items.par_iter().map(&f).collect())
}
