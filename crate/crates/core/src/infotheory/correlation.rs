use super::PairedSamples;
use crate::error::{reject, Error, Result};

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Pearson correlation of two equal-length slices.
pub fn pearson_slices(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return reject("pearson needs two equal-length vectors of length >= 2");
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn pearson(s: &PairedSamples) -> Result<f64> {
    pearson_slices(s.x(), s.y())
}

/// 1-based ranks, ties sharing their average rank.
pub fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman correlation: Pearson on average ranks.
pub fn spearman(s: &PairedSamples) -> Result<f64> {
    pearson_slices(&average_ranks(s.x()), &average_ranks(s.y()))
        .map_err(|_| Error::UndefinedCorrelation("a margin has all-equal values".into()))
}

/// The rank-difference form `1 − 6Σd²/(n(n²−1))`; exact only without ties.
pub fn spearman_rank_difference(s: &PairedSamples) -> f64 {
    let (rx, ry) = (average_ranks(s.x()), average_ranks(s.y()));
    let n = s.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Sample autocorrelation at `lag`, normalised by the full-series variance.
pub fn autocorrelation(series: &[f64], lag: usize) -> Result<f64> {
    if lag >= series.len() {
        return reject(format!("lag {lag} must be below the series length {}", series.len()));
    }
    let m = mean(series);
    let var: f64 = series.iter().map(|v| (v - m) * (v - m)).sum();
    if var == 0.0 {
        return Err(Error::UndefinedCorrelation("constant series".into()));
    }
    if lag == 0 {
        return Ok(1.0);
    }
    let cov: f64 = series.iter().zip(&series[lag..]).map(|(a, b)| (a - m) * (b - m)).sum();
    Ok(cov / var)
}
