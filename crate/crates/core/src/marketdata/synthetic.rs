use super::ohlc::{OhlcRecord, OhlcSeries};
use crate::error::{Error, Result};
use crate::sharding::shard_rng;
use chrono::{Datelike, Days, NaiveDate, Weekday};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Dependence structure of a synthetic equity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// `|d_k| = |n_k| + ε`: each day echoes the preceding night.
    NightToDay,
    /// `|n_{k+1}| = |d_k| + ε`: each night echoes the preceding day.
    DayToNight,
    Independent,
}

fn sign<R: Rng>(rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// Weekdays starting at 2020-01-02.
pub fn business_days(n: usize) -> Vec<NaiveDate> {
    let mut d = NaiveDate::from_ymd_opt(2020, 1, 2).expect("valid date");
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d + Days::new(1);
    }
    out
}

/// `days` trading days of prices starting at 100 with return scale `sigma`
/// and echo noise `eps`.
pub fn synthetic_ohlc(coupling: Coupling, days: usize, sigma: f64, eps: f64, seed: u64) -> Result<OhlcSeries> {
    if days < 2 {
        return Err(Error::RejectedParameters("need at least two days".into()));
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::RejectedParameters(e.to_string()))?;
    let mut rng = shard_rng(seed, 0);
    let mut d = vec![0.0; days];
    let mut n = vec![0.0; days];
    for k in 0..days {
        let noise = eps * rng.random::<f64>();
        match coupling {
            Coupling::NightToDay => {
                n[k] = normal.sample(&mut rng);
                d[k] = sign(&mut rng) * (n[k].abs() + noise);
            }
            Coupling::DayToNight => {
                d[k] = normal.sample(&mut rng);
                if k + 1 < days {
                    n[k + 1] = sign(&mut rng) * (d[k].abs() + noise);
                }
            }
            Coupling::Independent => {
                d[k] = normal.sample(&mut rng);
                n[k] = normal.sample(&mut rng);
            }
        }
    }
    let dates = business_days(days);
    let mut close = 100.0;
    let mut records = Vec::with_capacity(days);
    for k in 0..days {
        let open = if k == 0 { 100.0 } else { close * n[k].exp() };
        close = open * d[k].exp();
        records.push(OhlcRecord { date: dates[k], open, close });
    }
    OhlcSeries::new(records)
}
