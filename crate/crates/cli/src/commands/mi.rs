use crate::config::{impl_merge, parse_pairs, parse_range, resolve, CommonArgs};
use crate::error::{invalid, CliResult};
use crate::output::{Cell, Outputs, Table};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::PathBuf;
use stochlab::infotheory::*;

#[derive(Debug, Clone, Default, clap::Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MiArgs {
    /// Two-column CSV of x,y samples
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// AR(1) fixture, `a=0.8[,c=0][,sigma=1]`; `a` may be a `lo:hi:step` range
    #[arg(long)]
    pub ar1: Option<String>,
    /// Samples per AR(1) realisation
    #[arg(long)]
    pub n: Option<usize>,
    /// Neighbour count of the kNN estimators
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub bins: Option<usize>,
    /// Independent AR(1) realisations per coefficient
    #[arg(long)]
    pub seeds: Option<u64>,
    /// Comma-separated subset of histogram, knn1, knn2
    #[arg(long)]
    pub methods: Option<String>,
}

impl_merge!(MiArgs { input, ar1, n, k, bins, seeds, methods });

const ARTIFACTS: &[&str] = &["estimates", "fig1"];

fn methods(list: Option<&str>) -> CliResult<Vec<MiMethod>> {
    let list = list.unwrap_or("histogram,knn1,knn2");
    list.split(',')
        .map(|m| match m.trim() {
            "histogram" => Ok(MiMethod::Histogram),
            "knn1" => Ok(MiMethod::Knn1),
            "knn2" => Ok(MiMethod::Knn2),
            other => invalid(format!("unknown MI method {other:?}")),
        })
        .collect()
}

fn name(m: MiMethod) -> &'static str {
    match m {
        MiMethod::Histogram => "histogram",
        MiMethod::Knn1 => "knn1",
        MiMethod::Knn2 => "knn2",
        MiMethod::Analytic => "analytic",
    }
}

fn estimate(s: &PairedSamples, m: MiMethod, k: usize, bins: usize) -> CliResult<f64> {
    Ok(match m {
        MiMethod::Histogram => mi_histogram(s, bins)?.value,
        MiMethod::Knn1 => mi_knn(s, k, KnnAlgorithm::One)?.value,
        MiMethod::Knn2 => mi_knn(s, k, KnnAlgorithm::Two)?.value,
        MiMethod::Analytic => unreachable!("not an estimator"),
    })
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let s = if v.len() > 1 { (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    (m, s)
}

pub fn run(common: CommonArgs, args: MiArgs) -> CliResult<()> {
    let (rc, a) = resolve(common, args)?;
    let k = a.k.unwrap_or(5);
    let bins = a.bins.unwrap_or(10);
    let ms = methods(a.methods.as_deref())?;
    let mut out = Outputs::new(rc.out_dir.clone(), rc.format, rc.emit.as_deref(), ARTIFACTS)?;
    let summary = match (&a.input, &a.ar1) {
        (Some(_), Some(_)) => return invalid("give either --input or --ar1, not both"),
        (None, None) => return invalid("need --input FILE or --ar1 a=VALUE"),
        (Some(path), None) => {
            let file = std::fs::File::open(path).or_else(|e| invalid(format!("{}: {e}", path.display())))?;
            let (s, dropped) = PairedSamples::read_csv(file, true)?;
            let mut t = Table::new(&["method", "value"]);
            let mut values = serde_json::Map::new();
            for &m in &ms {
                let v = estimate(&s, m, k, bins)?;
                t.push(vec![name(m).into(), v.into()]);
                values.insert(name(m).into(), json!(v));
            }
            out.table("estimates", &t)?;
            let measures = information_measures(&histogram_joint(&s, bins)?, None)?;
            json!({ "N": s.len(), "dropped": dropped, "K": k, "bins": bins, "estimates": values, "histogram_measures": measures })
        }
        (None, Some(spec)) => {
            let (mut coeffs, mut c, mut sigma) = (None, 0.0, 1.0);
            for (key, v) in parse_pairs(spec)? {
                let num = || v.parse::<f64>().or_else(|_| invalid(format!("not a number: {v:?}")));
                match key.as_str() {
                    "a" => coeffs = Some(parse_range(&v)?),
                    "c" => c = num()?,
                    "sigma" => sigma = num()?,
                    _ => return invalid(format!("unknown AR(1) key {key:?}")),
                }
            }
            let Some(coeffs) = coeffs else { return invalid("--ar1 needs a=VALUE") };
            let n = a.n.unwrap_or(1000);
            let seeds = a.seeds.unwrap_or(20);
            if seeds == 0 {
                return invalid("--seeds must be at least 1");
            }
            let mut est = Table::new(&["a", "seed", "method", "value"]);
            let mut cols = vec!["a".to_string(), "analytic".to_string()];
            cols.extend(ms.iter().map(|m| name(*m).to_string()));
            let mut fig = Table::with_columns(cols);
            let mut rows = Vec::new();
            for &coef in &coeffs {
                let truth = gaussian_mi(coef)?;
                let mut per: Vec<Vec<f64>> = vec![Vec::new(); ms.len()];
                for s in 0..seeds {
                    let seed = rc.seed.wrapping_add(s);
                    let p = ar1_generate(coef, c, sigma, n, seed)?.pairs()?;
                    for (i, &m) in ms.iter().enumerate() {
                        let v = estimate(&p, m, k, bins)?;
                        est.push(vec![coef.into(), seed.into(), name(m).into(), v.into()]);
                        per[i].push(v);
                    }
                }
                let mut row: Vec<Cell> = vec![coef.into(), truth.into()];
                let mut stats = serde_json::Map::new();
                for (i, &m) in ms.iter().enumerate() {
                    let (mean, sd) = mean_std(&per[i]);
                    let mad = per[i].iter().map(|v| (v - truth).abs()).sum::<f64>() / per[i].len() as f64;
                    row.push(mean.into());
                    stats.insert(name(m).into(), json!({ "mean": mean, "std": sd, "mean_abs_dev": mad }));
                }
                fig.push(row);
                rows.push(json!({ "a": coef, "analytic": truth, "methods": stats }));
            }
            out.table("estimates", &est)?;
            out.table("fig1", &fig)?;
            json!({ "N": n, "K": k, "bins": bins, "seeds": seeds, "c": c, "sigma": sigma, "results": rows })
        }
    };
    out.json("summary", &summary)?;
    let a = MiArgs { k: Some(k), bins: Some(bins), ..a };
    super::finish(out, &rc, "mi", &a)
}
