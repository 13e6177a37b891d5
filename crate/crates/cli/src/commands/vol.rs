use crate::config::{resolve, CommonArgs};
use crate::error::{invalid, CliResult};
use crate::output::{Outputs, Table};
use serde_json::json;
use stochlab::marketdata::*;

super::market_args! {
    pub struct VolArgs {
        /// Rolling window in trading days
        #[arg(long)]
        pub window: Option<usize>,
        /// Largest lead or lag, in days, of the |overnight| vs |intraday| correlation
        #[arg(long)]
        pub max_lag: Option<i64>,
        /// Flag returns beyond this many standard deviations
        #[arg(long)]
        pub outlier_threshold: Option<f64>,
    }
}

const ARTIFACTS: &[&str] = &["volatility", "leadlag", "anomalies"];

fn annualized(v: &[f64]) -> f64 {
    let xs: Vec<f64> = v.iter().copied().filter(|x| x.is_finite()).collect();
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() * TRADING_DAYS.sqrt() * 100.0
}

pub fn run(common: CommonArgs, args: VolArgs) -> CliResult<()> {
    let (rc, a) = resolve(common, args)?;
    let window = a.window.unwrap_or(20);
    let max_lag = a.max_lag.unwrap_or(5);
    if max_lag < 0 {
        return invalid("--max-lag must be non-negative");
    }
    let mut out = Outputs::new(rc.out_dir.clone(), rc.format, rc.emit.as_deref(), ARTIFACTS)?;
    let (series, load) = a.source().load(rc.seed)?;
    let r = session_returns(&series)?;

    let vd = rolling_volatility(&r.d, window)?;
    let vn = rolling_volatility(&r.n, window)?;
    let mut t = Table::new(&["date", "intraday", "overnight"]);
    for i in 0..vd.len() {
        t.push(vec![r.dates[i + window - 1].to_string().into(), vd[i].into(), vn[i].into()]);
    }
    out.table("volatility", &t)?;

    let abs_n: Vec<f64> = r.n.iter().map(|x| x.abs()).collect();
    let abs_d: Vec<f64> = r.d.iter().map(|x| x.abs()).collect();
    let mut ll = Table::new(&["tau", "corr"]);
    for tau in -max_lag..=max_lag {
        ll.push(vec![tau.into(), lead_lag_correlation(&abs_n, &abs_d, tau)?.into()]);
    }
    out.table("leadlag", &ll)?;
    let anomalies = r.outliers(a.outlier_threshold.unwrap_or(5.0));
    out.table("anomalies", &super::asymmetry::anomaly_table(&anomalies))?;

    out.json(
        "summary",
        &json!({
            "days": series.len(),
            "sessions": r.len(),
            "annualized_intraday": annualized(&r.d),
            "annualized_overnight": annualized(&r.n),
            "window": window,
            "anomalies": anomalies.len(),
            "load": load,
        }),
    )?;
    let a = VolArgs { window: Some(window), max_lag: Some(max_lag), ..a };
    super::finish(out, &rc, "vol", &a)
}
