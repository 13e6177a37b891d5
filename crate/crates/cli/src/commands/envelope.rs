use crate::config::{impl_merge, resolve, CommonArgs};
use crate::error::{invalid, CliResult};
use crate::output::{Outputs, Table};
use serde::{Deserialize, Serialize};
use serde_json::json;
use stochlab::parrondo::*;

#[derive(Debug, Clone, Default, clap::Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvelopeArgs {
    /// Smaller amount
    #[arg(long)]
    pub x: Option<f64>,
    /// Switching probability after seeing the smaller amount
    #[arg(long)]
    pub p1: Option<f64>,
    /// Switching probability after seeing the larger amount
    #[arg(long)]
    pub p2: Option<f64>,
    /// Rounds to play
    #[arg(long)]
    pub t: Option<usize>,
}

impl_merge!(EnvelopeArgs { x, p1, p2, t });

const ARTIFACTS: &[&str] = &["growth", "pmf"];

pub fn run(common: CommonArgs, args: EnvelopeArgs) -> CliResult<()> {
    let (rc, a) = resolve(common, args)?;
    let (x, p1, p2, t) = (a.x.unwrap_or(1.0), a.p1.unwrap_or(0.2), a.p2.unwrap_or(0.3), a.t.unwrap_or(1000));
    if !(x > 0.0 && x.is_finite()) {
        return invalid("--x must be positive");
    }
    if t == 0 {
        return invalid("--t must be at least 1");
    }
    let spec = EnvelopeSpec::new(AmountLaw::delta(x), SwitchingFunction::Table { x: vec![x, 2.0 * x], p: vec![p1, p2] });
    let mo = envelope_moments(&spec)?;
    let mut out = Outputs::new(rc.out_dir.clone(), rc.format, rc.emit.as_deref(), ARTIFACTS)?;

    let mut d = CapitalPmf::point(spec.unit());
    let mut g = Table::new(&["t", "mean", "variance", "mean_over_t", "variance_over_t"]);
    for step in 1..=t {
        d = envelope_evolve(&spec, &d)?;
        let (m, v) = (d.mean(), d.variance());
        g.push(vec![step.into(), m.into(), v.into(), (m / step as f64).into(), (v / step as f64).into()]);
    }
    out.table("growth", &g)?;
    let mut p = Table::new(&["capital", "mass"]);
    for (i, m) in d.masses.iter().enumerate() {
        p.push(vec![((d.offset + i as i64) as f64 * d.unit).into(), (*m).into()]);
    }
    out.table("pmf", &p)?;
    out.json(
        "summary",
        &json!({ "r": mo.r, "v": mo.v, "t": t, "mean": d.mean(), "variance": d.variance() }),
    )?;
    let a = EnvelopeArgs { x: Some(x), p1: Some(p1), p2: Some(p2), t: Some(t) };
    super::finish(out, &rc, "envelope", &a)
}
