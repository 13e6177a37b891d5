use super::{MiEstimate, MiMethod, PairedSamples};
use crate::error::{reject, Result};
use crate::numerics::digamma;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const JITTER_SEED: u64 = 0x6b6e_6e6a;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KnnAlgorithm {
    /// Strict counts inside the joint max-norm radius.
    One,
    /// Non-strict counts inside the per-axis projected radii.
    Two,
}

impl KnnAlgorithm {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => reject(format!("KNN algorithm must be 1 or 2, got {n}")),
        }
    }
}

/// Neighbour search strategy; both give identical counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NeighborSearch {
    #[default]
    BruteForce,
    Sorted,
}

fn has_duplicates(v: &[f64]) -> bool {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s.windows(2).any(|w| w[0] == w[1])
}

fn range(v: &[f64]) -> f64 {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

/// Copies of both margins, jittered by `1e-10 · range` when any value repeats.
fn prepare(s: &PairedSamples) -> Result<(Vec<f64>, Vec<f64>)> {
    let (mut x, mut y) = (s.x().to_vec(), s.y().to_vec());
    let (rx, ry) = (range(&x), range(&y));
    if rx == 0.0 || ry == 0.0 {
        return reject("degenerate margin: all values equal");
    }
    if has_duplicates(&x) || has_duplicates(&y) {
        let mut rng = ChaCha8Rng::seed_from_u64(JITTER_SEED);
        for v in x.iter_mut() {
            *v += 1e-10 * rx * rng.random_range(-1.0..1.0);
        }
        for v in y.iter_mut() {
            *v += 1e-10 * ry * rng.random_range(-1.0..1.0);
        }
    }
    Ok((x, y))
}

#[derive(Clone, Copy, PartialEq)]
struct Cand {
    dist: f64,
    idx: usize,
}

impl Eq for Cand {}

impl Ord for Cand {
    fn cmp(&self, o: &Self) -> Ordering {
        self.dist.total_cmp(&o.dist).then(self.idx.cmp(&o.idx))
    }
}

impl PartialOrd for Cand {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// The K nearest neighbours of `i` under the max-norm, ties broken by index.
fn neighbours_brute(x: &[f64], y: &[f64], i: usize, k: usize) -> Vec<usize> {
    let mut c: Vec<Cand> = (0..x.len())
        .filter(|&j| j != i)
        .map(|j| Cand { dist: (x[j] - x[i]).abs().max((y[j] - y[i]).abs()), idx: j })
        .collect();
    c.select_nth_unstable(k - 1);
    c.truncate(k);
    c.into_iter().map(|c| c.idx).collect()
}

fn neighbours_sorted(x: &[f64], y: &[f64], order: &[usize], pos: usize, k: usize) -> Vec<usize> {
    let i = order[pos];
    let mut heap: BinaryHeap<Cand> = BinaryHeap::with_capacity(k + 1);
    let (mut l, mut r) = (pos, pos + 1);
    let mut left_open = pos > 0;
    let mut right_open = r < order.len();
    while left_open || right_open {
        for side in [0, 1] {
            let j = match side {
                0 if left_open => order[l - 1],
                1 if right_open => order[r],
                _ => continue,
            };
            let gap = (x[j] - x[i]).abs();
            if heap.len() == k && gap > heap.peek().unwrap().dist {
                if side == 0 {
                    left_open = false;
                } else {
                    right_open = false;
                }
                continue;
            }
            let cand = Cand { dist: gap.max((y[j] - y[i]).abs()), idx: j };
            if heap.len() < k {
                heap.push(cand);
            } else if cand < *heap.peek().unwrap() {
                heap.pop();
                heap.push(cand);
            }
            if side == 0 {
                l -= 1;
                left_open = l > 0;
            } else {
                r += 1;
                right_open = r < order.len();
            }
        }
    }
    heap.into_iter().map(|c| c.idx).collect()
}

fn count_within(sorted: &[f64], c: f64, r: f64, strict: bool) -> usize {
    let (lo, hi) = if strict {
        (sorted.partition_point(|&v| c - v >= r), sorted.partition_point(|&v| v - c < r))
    } else {
        (sorted.partition_point(|&v| c - v > r), sorted.partition_point(|&v| v - c <= r))
    };
    let inside = hi.saturating_sub(lo);
    let self_inside = if strict { r > 0.0 } else { true };
    inside - usize::from(self_inside)
}

fn counts_from_neighbours(
    x: &[f64],
    y: &[f64],
    i: usize,
    nb: &[usize],
    alg: KnnAlgorithm,
    count: impl Fn(bool, f64, f64, bool) -> usize,
) -> (usize, usize) {
    let ex = nb.iter().map(|&j| (x[j] - x[i]).abs()).fold(0.0, f64::max);
    let ey = nb.iter().map(|&j| (y[j] - y[i]).abs()).fold(0.0, f64::max);
    match alg {
        KnnAlgorithm::One => {
            let e = ex.max(ey);
            (count(true, x[i], e, true), count(false, y[i], e, true))
        }
        KnnAlgorithm::Two => (count(true, x[i], ex, false), count(false, y[i], ey, false)),
    }
}

/// Per-point marginal counts `(n_x, n_y)` by exhaustive search.
pub fn knn_counts_brute(x: &[f64], y: &[f64], k: usize, alg: KnnAlgorithm) -> Vec<(usize, usize)> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let nb = neighbours_brute(x, y, i, k);
            let count = |on_x: bool, c: f64, r: f64, strict: bool| {
                let v = if on_x { x } else { y };
                (0..n)
                    .filter(|&j| j != i)
                    .filter(|&j| {
                        let d = (v[j] - c).abs();
                        if strict {
                            d < r
                        } else {
                            d <= r
                        }
                    })
                    .count()
            };
            counts_from_neighbours(x, y, i, &nb, alg, count)
        })
        .collect()
}

/// Per-point marginal counts using an x-sorted sweep and binary searches.
pub fn knn_counts_sorted(x: &[f64], y: &[f64], k: usize, alg: KnnAlgorithm) -> Vec<(usize, usize)> {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    let mut xs = x.to_vec();
    xs.sort_by(f64::total_cmp);
    let mut ys = y.to_vec();
    ys.sort_by(f64::total_cmp);
    let mut out = vec![(0, 0); n];
    for pos in 0..n {
        let i = order[pos];
        let nb = neighbours_sorted(x, y, &order, pos, k);
        let count = |on_x: bool, c: f64, r: f64, strict: bool| count_within(if on_x { &xs } else { &ys }, c, r, strict);
        out[i] = counts_from_neighbours(x, y, i, &nb, alg, count);
    }
    out
}

/// Kraskov–Stögbauer–Grassberger estimate in nats, brute-force neighbours.
pub fn mi_knn(s: &PairedSamples, k: usize, alg: KnnAlgorithm) -> Result<MiEstimate> {
    mi_knn_with(s, k, alg, NeighborSearch::BruteForce)
}

pub fn mi_knn_with(s: &PairedSamples, k: usize, alg: KnnAlgorithm, search: NeighborSearch) -> Result<MiEstimate> {
    let n = s.len();
    if k < 1 {
        return reject("K must be at least 1");
    }
    if n <= k + 1 {
        return reject(format!("need N > K + 1, got N = {n}, K = {k}"));
    }
    let (x, y) = prepare(s)?;
    let counts = match search {
        NeighborSearch::BruteForce => knn_counts_brute(&x, &y, k, alg),
        NeighborSearch::Sorted => knn_counts_sorted(&x, &y, k, alg),
    };
    let psi: Vec<f64> = (0..=n + 1).map(|m| if m == 0 { 0.0 } else { digamma(m as f64).unwrap() }).collect();
    let (shift, extra) = match alg {
        KnnAlgorithm::One => (1, 0.0),
        KnnAlgorithm::Two => (0, 1.0 / k as f64),
    };
    let mut acc = 0.0;
    for &(nx, ny) in &counts {
        let (a, b) = (nx + shift, ny + shift);
        if a == 0 || b == 0 {
            return Err(crate::Error::NumericalFailure {
                detail: "empty marginal neighbourhood".into(),
                residual: 0.0,
            });
        }
        acc += psi[a] + psi[b];
    }
    let value = psi[k] - extra - acc / n as f64 + psi[n];
    let method = match alg {
        KnnAlgorithm::One => MiMethod::Knn1,
        KnnAlgorithm::Two => MiMethod::Knn2,
    };
    Ok(MiEstimate { value, method, params: k, n })
}
