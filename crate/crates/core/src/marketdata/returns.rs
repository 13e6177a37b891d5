use super::ohlc::OhlcSeries;
use crate::error::{Error, Result};
use crate::infotheory::pearson_slices;
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// Intraday returns `d_k = ln(c_k/o_k)` and overnight returns
/// `n_k = ln(o_k/c_{k−1})` for days `k = 1 … T−1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionReturns {
    pub dates: Vec<NaiveDate>,
    pub d: Vec<f64>,
    pub n: Vec<f64>,
}

pub fn session_returns(s: &OhlcSeries) -> Result<SessionReturns> {
    let r = s.records();
    if r.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: r.len() });
    }
    let mut out = SessionReturns {
        dates: Vec::with_capacity(r.len() - 1),
        d: Vec::with_capacity(r.len() - 1),
        n: Vec::with_capacity(r.len() - 1),
    };
    for w in r.windows(2) {
        out.dates.push(w[1].date);
        out.d.push((w[1].close / w[1].open).ln());
        out.n.push((w[1].open / w[0].close).ln());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Session {
    Intraday,
    Overnight,
}

/// A return more than the threshold number of sample standard deviations from zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anomaly {
    pub index: usize,
    pub date: NaiveDate,
    pub session: Session,
    pub value: f64,
    pub sigmas: f64,
}

fn std_dev(v: &[f64]) -> f64 {
    let xs: Vec<f64> = v.iter().copied().filter(|x| x.is_finite()).collect();
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

impl SessionReturns {
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Flags `|r| > threshold·σ` separately for each session type.
    pub fn outliers(&self, threshold: f64) -> Vec<Anomaly> {
        let mut out = Vec::new();
        for (session, v) in [(Session::Intraday, &self.d), (Session::Overnight, &self.n)] {
            let s = std_dev(v);
            if !(s > 0.0) {
                continue;
            }
            for (i, x) in v.iter().enumerate() {
                if x.abs() > threshold * s {
                    out.push(Anomaly { index: i, date: self.dates[i], session, value: *x, sigmas: x.abs() / s });
                }
            }
        }
        out
    }

    /// Blanks flagged returns to NaN so that every pair touching them is skipped.
    pub fn without(&self, anomalies: &[Anomaly]) -> Self {
        let mut out = self.clone();
        for a in anomalies {
            match a.session {
                Session::Intraday => out.d[a.index] = f64::NAN,
                Session::Overnight => out.n[a.index] = f64::NAN,
            }
        }
        out
    }
}

pub const TRADING_DAYS: f64 = 252.0;

/// Annualised rolling volatility in percent: the `(n−1)`-denominator standard
/// deviation of each window of `n` returns, times `√252·100`.
pub fn rolling_volatility(returns: &[f64], n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::RejectedParameters(format!("window must hold at least 2 returns, got {n}")));
    }
    if returns.len() < n {
        return Err(Error::InsufficientData { needed: n, got: returns.len() });
    }
    let scale = TRADING_DAYS.sqrt() * 100.0;
    Ok(returns
        .windows(n)
        .map(|w| {
            let m = w.iter().sum::<f64>() / n as f64;
            (w.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt() * scale
        })
        .collect())
}

/// Minimum overlap for [`lead_lag_correlation`].
pub const MIN_OVERLAP: usize = 30;

/// Pearson correlation of `a_t` with `b_{t+τ}` over all `t` where both exist.
pub fn lead_lag_correlation(a: &[f64], b: &[f64], tau: i64) -> Result<f64> {
    let lo = (-tau).max(0);
    let hi = (a.len() as i64).min(b.len() as i64 - tau);
    let overlap = (hi - lo).max(0) as usize;
    if overlap < MIN_OVERLAP {
        return Err(Error::RejectedParameters(format!(
            "overlap {overlap} at lag {tau} is below {MIN_OVERLAP}"
        )));
    }
    let (lo, hi) = (lo as usize, hi as usize);
    let bs = &b[(lo as i64 + tau) as usize..(hi as i64 + tau) as usize];
    pearson_slices(&a[lo..hi], bs)
}

/// `100·(calls − puts)/(calls + puts)`.
pub fn sentiment_score(calls: u64, puts: u64) -> Result<f64> {
    let total = calls + puts;
    if total == 0 {
        return Err(Error::UndefinedScore);
    }
    Ok(100.0 * (calls as f64 - puts as f64) / total as f64)
}
