//! Dependence and information measures.

mod ar1;
mod correlation;
mod discrete;
mod histogram;
mod knn;
mod samples;

pub use ar1::{ar1_generate, Ar1Series};
pub use correlation::{autocorrelation, average_ranks, pearson, pearson_slices, spearman, spearman_rank_difference};
pub use discrete::{entropy, information_measures, kl_divergence, DiscreteJoint, DiscreteJoint3, InformationMeasures};
pub use histogram::{histogram_joint, mi_histogram};
pub use knn::{knn_counts_brute, knn_counts_sorted, mi_knn, mi_knn_with, KnnAlgorithm, NeighborSearch};
pub use samples::PairedSamples;

use serde::{Deserialize, Serialize};

/// Which estimator produced an [`MiEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MiMethod {
    Histogram,
    Knn1,
    Knn2,
    Analytic,
}

/// A mutual-information value in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiEstimate {
    pub value: f64,
    pub method: MiMethod,
    /// Bin count for histograms, K for the neighbour estimators, 0 for the analytic form.
    pub params: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

impl MiEstimate {
    pub fn bits(&self) -> f64 {
        self.value / std::f64::consts::LN_2
    }
}

/// Mutual information of the Gaussian AR(1) pair `(x_t, a x_{t−1})`: `−½ ln(1 − a²)`.
pub fn gaussian_mi(a: f64) -> crate::Result<f64> {
    if !a.is_finite() || a.abs() >= 1.0 {
        return Err(crate::Error::Divergence(a));
    }
    Ok(-0.5 * (-a * a).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mi_values() {
        assert_eq!(gaussian_mi(0.0).unwrap(), 0.0);
        assert!((gaussian_mi(0.6).unwrap() - 0.223_143_551).abs() < 1e-9);
        assert!((gaussian_mi(0.99).unwrap() - 1.958_517_773_6).abs() < 1e-9);
        assert!(gaussian_mi(1.0).is_err());
        assert!(gaussian_mi(-1.2).is_err());
    }
}
