use crate::config::{impl_merge, resolve, CommonArgs};
use crate::error::{invalid, CliError, CliResult};
use crate::output::{Cell, Outputs, Table};
use serde::{Deserialize, Serialize};
use serde_json::json;
use stochlab::parrondo::*;

#[derive(Debug, Clone, Default, clap::Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParrondoArgs {
    /// Three-rung game: uniform, capital or mix (biased by --eps)
    #[arg(long)]
    pub preset: Option<String>,
    /// Bias of the three-rung presets
    #[arg(long)]
    pub eps: Option<f64>,
    /// Rung count; must match the lengths of p and q
    #[arg(long = "m")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Per-rung win probabilities
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Per-rung lose probabilities (1 − p when absent)
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<f64>>,
    /// History-dependent game p1,p2,p3,p4 instead of a ladder
    #[arg(long, value_delimiter = ',')]
    pub history: Option<Vec<f64>>,
    /// Times of the exact distribution, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<usize>>,
    /// Walks for the history-game Monte-Carlo check
    #[arg(long)]
    pub walks: Option<usize>,
}

impl_merge!(ParrondoArgs { preset, eps, m, p, q, history, t, walks });

const ARTIFACTS: &[&str] = &["pmf", "profile", "rate"];

fn game(a: &ParrondoArgs) -> CliResult<GameSpec> {
    match (&a.preset, &a.p) {
        (Some(_), Some(_)) => invalid("give either a preset or p/q, not both"),
        (Some(name), None) => {
            let eps = a.eps.unwrap_or(0.005);
            let uniform = GameSpec::uniform(3, 0.5 - eps)?;
            let capital = GameSpec::capital_dependent(3, 0.1 - eps, 0.75 - eps)?;
            match name.as_str() {
                "uniform" => Ok(uniform),
                "capital" => Ok(capital),
                "mix" => Ok(mix_strategies(&uniform, &capital)?),
                _ => invalid(format!("unknown preset {name:?}; use uniform, capital or mix")),
            }
        }
        (None, Some(p)) => {
            if let Some(m) = a.m {
                if m != p.len() {
                    return invalid(format!("M = {m} but p has {} entries", p.len()));
                }
            }
            let q = a.q.clone().unwrap_or_else(|| p.iter().map(|v| 1.0 - v).collect());
            Ok(GameSpec::new(p.clone(), q)?)
        }
        (None, None) => invalid("need --preset, --p or --history"),
    }
}

fn run_history(rc: crate::config::Resolved, a: ParrondoArgs, h: &[f64]) -> CliResult<()> {
    let [p1, p2, p3, p4] = h else {
        return invalid("--history needs four probabilities");
    };
    let spec = HistoryGameSpec::new(*p1, *p2, *p3, *p4)?;
    let rv = history_rate_variance(&spec)?;
    let walks = a.walks.unwrap_or(200);
    let steps = a.t.as_ref().and_then(|t| t.last().copied()).unwrap_or(5000);
    let mc = simulate_history(&spec, walks, steps, rc.seed)?;
    let mut out = Outputs::new(rc.out_dir.clone(), rc.format, rc.emit.as_deref(), &[])?;
    out.json("summary", &json!({ "history": spec, "rates": rv, "simulation": mc }))?;
    let a = ParrondoArgs { walks: Some(walks), ..a };
    super::finish(out, &rc, "parrondo", &a)
}

pub fn run(common: CommonArgs, args: ParrondoArgs) -> CliResult<()> {
    let (rc, a) = resolve(common, args)?;
    if let Some(h) = a.history.clone() {
        if a.preset.is_some() || a.p.is_some() {
            return invalid("--history excludes ladder parameters");
        }
        return run_history(rc, a, &h);
    }
    let g = game(&a)?;
    let times = a.t.clone().unwrap_or_else(|| vec![200]);
    if times.is_empty() || times.contains(&0) {
        return invalid("--t needs positive times");
    }
    let m = g.m();
    let rv = rate_variance(&g)?;
    let formulas = rate_formulas(&g)?;
    let mut out = Outputs::new(rc.out_dir.clone(), rc.format, rc.emit.as_deref(), ARTIFACTS)?;

    let mut cols: Vec<String> = ["t", "n", "total"].iter().map(|s| s.to_string()).collect();
    cols.extend((0..m).map(|l| format!("rung_{l}")));
    let mut pmf = Table::with_columns(cols);
    let mut prof = Table::new(&["t", "n", "x", "exact", "asymptotic"]);
    let mut peaks = Vec::new();
    for &t in &times {
        let d = exact_pmf(&g, t);
        let summed = d.summed();
        for n in d.n_min()..=d.n_max() {
            let mut row: Vec<Cell> = vec![t.into(), n.into(), summed[(n - d.n_min()) as usize].into()];
            row.extend((0..m).map(|l| Cell::from(d.get(n, l))));
            pmf.push(row);
        }
        peaks.push(json!({ "t": t, "n": d.argmax_cell(), "drift_law": rv.r * t as f64 }));
        if out.wants("profile") {
            let half = 4.0 * (rv.k.max(1e-12) / t as f64).sqrt();
            let lim = 1.0 / m as f64;
            let (lo, hi) = ((rv.r - half).max(-lim), (rv.r + half).min(lim));
            match asymptotic_profile(&g, t, lo, hi) {
                Ok(p) => {
                    for pt in p.points {
                        prof.push(vec![t.into(), pt.n.into(), pt.x.into(), summed.get((pt.n - d.n_min()) as usize).copied().unwrap_or(0.0).into(), pt.mass.into()]);
                    }
                }
                Err(stochlab::Error::OutOfSupport { .. }) => {}
                Err(e) => return Err(CliError::Core(e)),
            }
        }
    }
    out.table("pmf", &pmf)?;
    out.table("profile", &prof)?;

    let mut rate = Table::new(&["x", "u", "kappa"]);
    let lim = 1.0 / m as f64;
    for i in 1..200 {
        let x = -lim + 2.0 * lim * i as f64 / 200.0;
        match rate_function(&g, x) {
            Ok(p) => rate.push(vec![x.into(), p.u.into(), p.kappa.into()]),
            Err(stochlab::Error::OutOfSupport { .. }) => {}
            Err(e) => return Err(CliError::Core(e)),
        }
    }
    out.table("rate", &rate)?;
    out.json(
        "summary",
        &json!({ "M": m, "p": g.p(), "q": g.q(), "rates": rv, "formulas": formulas, "r": rv.r, "K": rv.k, "peaks": peaks }),
    )?;
    let a = ParrondoArgs { t: Some(times), ..a };
    super::finish(out, &rc, "parrondo", &a)
}
