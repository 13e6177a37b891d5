use crate::config::{resolve, CommonArgs};
use crate::error::CliResult;
use crate::output::{Outputs, Table};
use serde_json::json;
use stochlab::marketdata::*;

super::market_args! {
    pub struct AsymmetryArgs {
        /// Neighbour count for the MI measure
        #[arg(long)]
        pub k: Option<usize>,
        /// Comma-separated subset of spearman, pearson, mi
        #[arg(long)]
        pub methods: Option<String>,
        /// Flag returns beyond this many standard deviations
        #[arg(long)]
        pub outlier_threshold: Option<f64>,
        /// Blank flagged returns before measuring
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        pub drop_outliers: Option<bool>,
    }
}

const ARTIFACTS: &[&str] = &["asymmetry", "anomalies", "returns"];

pub fn parse_methods(list: Option<&str>) -> CliResult<Vec<AsymmetryMethod>> {
    match list {
        None => Ok(AsymmetryMethod::ALL.to_vec()),
        Some(l) => Ok(l.split(',').map(|m| AsymmetryMethod::parse(m.trim())).collect::<Result<_, _>>()?),
    }
}

pub fn anomaly_table(anomalies: &[Anomaly]) -> Table {
    let mut t = Table::new(&["date", "session", "value", "sigmas"]);
    for a in anomalies {
        let session = match a.session {
            Session::Intraday => "intraday",
            Session::Overnight => "overnight",
        };
        t.push(vec![a.date.to_string().into(), session.into(), a.value.into(), a.sigmas.into()]);
    }
    t
}

pub fn run(common: CommonArgs, args: AsymmetryArgs) -> CliResult<()> {
    let (rc, a) = resolve(common, args)?;
    let methods = parse_methods(a.methods.as_deref())?;
    let k = a.k.unwrap_or(DEFAULT_K);
    let threshold = a.outlier_threshold.unwrap_or(5.0);
    let mut out = Outputs::new(rc.out_dir.clone(), rc.format, rc.emit.as_deref(), ARTIFACTS)?;

    let (series, load) = a.source().load(rc.seed)?;
    let raw = session_returns(&series)?;
    let anomalies = raw.outliers(threshold);
    let used = if a.drop_outliers.unwrap_or(false) { raw.without(&anomalies) } else { raw.clone() };
    let report = asymmetry(&used, &methods, k)?;

    let mut t = Table::new(&["method", "C_nd", "C_dn", "ratio", "pairs_nd", "pairs_dn"]);
    for m in &report.methods {
        t.push(vec![
            m.method.name().into(),
            m.c_nd.into(),
            m.c_dn.into(),
            m.ratio.unwrap_or(f64::NAN).into(),
            m.pairs_nd.into(),
            m.pairs_dn.into(),
        ]);
    }
    out.table("asymmetry", &t)?;
    out.table("anomalies", &anomaly_table(&anomalies))?;
    let mut r = Table::new(&["date", "intraday", "overnight"]);
    for i in 0..raw.len() {
        r.push(vec![raw.dates[i].to_string().into(), raw.d[i].into(), raw.n[i].into()]);
    }
    out.table("returns", &r)?;
    out.json("summary", &json!({ "report": report, "load": load, "anomalies": anomalies.len(), "outlier_threshold": threshold }))?;
    let a = AsymmetryArgs { k: Some(k), outlier_threshold: Some(threshold), ..a };
    super::finish(out, &rc, "asymmetry", &a)
}
