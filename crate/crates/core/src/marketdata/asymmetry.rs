use super::returns::SessionReturns;
use crate::error::{Error, Result};
use crate::infotheory::{mi_knn, pearson, spearman, KnnAlgorithm, PairedSamples};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Fewest aligned days accepted by [`asymmetry`].
pub const MIN_DAYS: usize = 30;
pub const DEFAULT_K: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymmetryMethod {
    Pearson,
    Spearman,
    MiKnn,
}

impl AsymmetryMethod {
    pub const ALL: [Self; 3] = [Self::Pearson, Self::Spearman, Self::MiKnn];

    pub fn name(self) -> &'static str {
        match self {
            Self::Pearson => "pearson",
            Self::Spearman => "spearman",
            Self::MiKnn => "mi_knn",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::RejectedParameters(format!("unknown asymmetry method '{s}'")))
    }
}

/// Night→day and day→night dependence under one measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodAsymmetry {
    pub method: AsymmetryMethod,
    #[serde(rename = "C_nd")]
    pub c_nd: f64,
    #[serde(rename = "C_dn")]
    pub c_dn: f64,
    /// `C_nd/C_dn`; for MI only when both values are positive.
    pub ratio: Option<f64>,
    pub pairs_nd: usize,
    pub pairs_dn: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryReport {
    pub days: usize,
    pub k: usize,
    pub methods: Vec<MethodAsymmetry>,
}

impl AsymmetryReport {
    pub fn get(&self, m: AsymmetryMethod) -> Option<&MethodAsymmetry> {
        self.methods.iter().find(|r| r.method == m)
    }

    /// One flat CSV row per equity: `label,days,<method>_nd,<method>_dn,<method>_ratio,…`.
    pub fn write_csv_row<W: Write>(&self, w: &mut W, label: &str, header: bool) -> Result<()> {
        if header {
            let mut cols = vec!["label".to_string(), "days".to_string()];
            for m in &self.methods {
                let n = m.method.name();
                cols.extend([format!("{n}_nd"), format!("{n}_dn"), format!("{n}_ratio")]);
            }
            writeln!(w, "{}", cols.join(","))?;
        }
        let mut cells = vec![label.to_string(), self.days.to_string()];
        for m in &self.methods {
            cells.extend([
                m.c_nd.to_string(),
                m.c_dn.to_string(),
                m.ratio.map_or(String::new(), |r| r.to_string()),
            ]);
        }
        writeln!(w, "{}", cells.join(","))?;
        Ok(())
    }
}

/// `C_nd` pairs `|d_k|` with the preceding night `|n_k|`; `C_dn` pairs `|d_k|`
/// with the following night `|n_{k+1}|`. Pairs holding a NaN are skipped.
pub fn asymmetry(sr: &SessionReturns, methods: &[AsymmetryMethod], k: usize) -> Result<AsymmetryReport> {
    let days = sr.len();
    if days < MIN_DAYS {
        return Err(Error::InsufficientData { needed: MIN_DAYS, got: days });
    }
    let vd: Vec<f64> = sr.d.iter().map(|x| x.abs()).collect();
    let vn: Vec<f64> = sr.n.iter().map(|x| x.abs()).collect();
    let (nd, _) = PairedSamples::cleaned(&vd, &vn)?;
    let (dn, _) = PairedSamples::cleaned(&vd[..days - 1], &vn[1..])?;
    let mut out = Vec::with_capacity(methods.len());
    for &method in methods {
        let (c_nd, c_dn) = match method {
            AsymmetryMethod::Pearson => (pearson(&nd)?, pearson(&dn)?),
            AsymmetryMethod::Spearman => (spearman(&nd)?, spearman(&dn)?),
            AsymmetryMethod::MiKnn => {
                let n = nd.len().min(dn.len());
                if k == 0 || n < 3 * k {
                    return Err(Error::RejectedParameters(format!("KNN needs N ≥ 3K, got N = {n}, K = {k}")));
                }
                (mi_knn(&nd, k, KnnAlgorithm::Two)?.value, mi_knn(&dn, k, KnnAlgorithm::Two)?.value)
            }
        };
        let ratio = match method {
            AsymmetryMethod::MiKnn => (c_nd > 0.0 && c_dn > 0.0).then(|| c_nd / c_dn),
            _ => (c_dn != 0.0).then(|| c_nd / c_dn),
        };
        out.push(MethodAsymmetry { method, c_nd, c_dn, ratio, pairs_nd: nd.len(), pairs_dn: dn.len() });
    }
    Ok(AsymmetryReport { days, k, methods: out })
}
