use super::{DiscreteJoint, MiEstimate, MiMethod, PairedSamples};
use crate::error::{reject, Result};

fn bin_indices(v: &[f64], bins: usize) -> Result<Vec<usize>> {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return reject("degenerate margin: min equals max");
    }
    let width = (hi - lo) / bins as f64;
    Ok(v.iter().map(|x| (((x - lo) / width) as usize).min(bins - 1)).collect())
}

/// Empirical joint of equal-width bins spanning each margin's `[min, max]`.
pub fn histogram_joint(s: &PairedSamples, bins: usize) -> Result<DiscreteJoint> {
    if bins < 2 {
        return reject(format!("need at least two bins, got {bins}"));
    }
    let (bx, by) = (bin_indices(s.x(), bins)?, bin_indices(s.y(), bins)?);
    let mut counts = vec![0.0; bins * bins];
    for (i, j) in bx.into_iter().zip(by) {
        counts[i * bins + j] += 1.0;
    }
    DiscreteJoint::from_counts(bins, bins, &counts)
}

pub fn mi_histogram(s: &PairedSamples, bins: usize) -> Result<MiEstimate> {
    let j = histogram_joint(s, bins)?;
    Ok(MiEstimate { value: j.mutual_information(), method: MiMethod::Histogram, params: bins, n: s.len() })
}
