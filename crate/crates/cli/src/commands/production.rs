use crate::config::{impl_merge, resolve, CommonArgs};
use crate::error::{invalid, CliResult};
use crate::output::{Outputs, Table};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::PathBuf;
use stochlab::numerics::GridPdf;
use stochlab::production::*;
use stochlab::sharding::par_map;

#[derive(Debug, Clone, Default, clap::Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProductionArgs {
    /// Drift per step
    #[arg(long)]
    pub g: Option<f64>,
    /// Gaussian noise width
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Lorentzian noise half-width
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Noise density as an x,density CSV on a uniform grid
    #[arg(long)]
    pub noise_csv: Option<PathBuf>,
    /// Depreciation rate per step
    #[arg(long)]
    pub d: Option<f64>,
    /// Final time
    #[arg(long)]
    pub t: Option<usize>,
    /// Grid spacing of the recursion
    #[arg(long)]
    pub dx: Option<f64>,
    /// Cells of the emitted increment density
    #[arg(long)]
    pub bins: Option<usize>,
    /// Times at which the log-production density is emitted
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<usize>>,
    /// Monte-Carlo paths (0 skips the simulation)
    #[arg(long)]
    pub paths: Option<usize>,
    /// Noise widths of a narrow-limit sweep, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub narrow_sweep: Option<Vec<f64>>,
}

impl_merge!(ProductionArgs { g, sigma, gamma, noise_csv, d, t, dx, bins, snapshots, paths, narrow_sweep });

const ARTIFACTS: &[&str] = &["voldist", "zdist", "moments", "mc", "narrow"];

fn noise(a: &ProductionArgs) -> CliResult<NoiseSpec> {
    match (a.sigma, a.gamma, &a.noise_csv) {
        (Some(s), None, None) => Ok(NoiseSpec::gaussian(s)?),
        (None, Some(g), None) => Ok(NoiseSpec::lorentzian(g)?),
        (None, None, Some(p)) => {
            let f = std::fs::File::open(p).or_else(|e| invalid(format!("{}: {e}", p.display())))?;
            Ok(NoiseSpec::custom(GridPdf::read_csv(f)?)?)
        }
        (None, None, None) => invalid("need one of --sigma, --gamma or --noise-csv"),
        _ => invalid("--sigma, --gamma and --noise-csv are exclusive"),
    }
}

fn sample_moments(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

pub fn run(common: CommonArgs, args: ProductionArgs) -> CliResult<()> {
    let (rc, a) = resolve(common, args)?;
    let Some(g) = a.g else { return invalid("need --g") };
    let spec = ProductionModelSpec::new(g, noise(&a)?, a.d.unwrap_or(0.0))?;
    let t = a.t.unwrap_or(400);
    if t == 0 {
        return invalid("--t must be at least 1");
    }
    let snapshots = a.snapshots.clone().unwrap_or_else(|| vec![t]);
    if snapshots.iter().any(|s| *s == 0 || *s > t) {
        return invalid(format!("snapshots must lie in 1..={t}"));
    }
    let opts = EvolveOptions { dx: a.dx, ..Default::default() };
    let mut out = Outputs::new(rc.out_dir.clone(), rc.format, rc.emit.as_deref(), ARTIFACTS)?;

    let mut state = PdfState::initial(&spec, opts)?;
    let mut zdist = Table::new(&["t", "z", "density"]);
    let mut moments = Table::new(&["t", "mean_log_z", "var_log_z", "mean_delta", "var_delta"]);
    for step in 1..=t {
        state = evolve_pdf(&state, &spec)?;
        let z = state.rho_z()?;
        let v = volatility_moments(&state)?;
        moments.push(vec![step.into(), z.mean().into(), z.variance().into(), v.mean.into(), v.var.into()]);
        if snapshots.contains(&step) {
            for (i, dens) in z.density().iter().enumerate() {
                zdist.push(vec![step.into(), z.x(i).into(), (*dens).into()]);
            }
        }
    }
    out.table("zdist", &zdist)?;
    out.table("moments", &moments)?;

    let vm = volatility_moments(&state)?;
    let vd = volatility_pdf(&state, a.bins.unwrap_or(400))?;
    let mut vt = Table::new(&["x", "density"]);
    for (i, dens) in vd.density().iter().enumerate() {
        vt.push(vec![vd.x(i).into(), (*dens).into()]);
    }
    out.table("voldist", &vt)?;

    let mut summary = json!({
        "g": g,
        "d": spec.d(),
        "noise": spec.noise(),
        "t": t,
        "dx": state.dx(),
        "mean_delta": vm.mean,
        "var_delta": vm.var,
        "c3_delta": vm.c3,
        "c4_delta": vm.c4,
    });
    let extra = summary.as_object_mut().expect("object");
    if let Some(sigma) = spec.gaussian_sigma() {
        let reference = depreciation_volatility(g, sigma, spec.d())?;
        extra.insert("tanh_law".into(), json!(reference));
        extra.insert("var_ratio".into(), json!(vm.var / reference));
        if let Ok(s) = saddle_moments(&spec, t) {
            extra.insert("saddle".into(), json!(s));
        }
        if let Ok(c) = delta_cumulants(&spec) {
            extra.insert("closed_cumulants".into(), json!(c));
        }
    }

    let paths = a.paths.unwrap_or(0);
    if paths > 0 {
        let mut times = snapshots.clone();
        if !times.contains(&t) {
            times.push(t);
        }
        times.sort_unstable();
        let p = simulate_paths(&spec, &times, paths, rc.seed)?;
        let mut mc = Table::new(&["t", "mean_log_z", "var_log_z", "mean_delta", "var_delta"]);
        for (i, &tt) in times.iter().enumerate() {
            let (mz, vz) = sample_moments(&p.log_z[i]);
            let (md, vdl) = sample_moments(&p.delta[i]);
            mc.push(vec![tt.into(), mz.into(), vz.into(), md.into(), vdl.into()]);
        }
        out.table("mc", &mc)?;
        let (_, v_last) = sample_moments(&p.delta[times.iter().position(|x| *x == t).expect("t recorded")]);
        extra.insert("mc_var_delta".into(), json!(v_last));
        extra.insert("paths".into(), json!(paths));
    }

    if let Some(sigmas) = &a.narrow_sweep {
        if out.wants("narrow") {
            let rows: Vec<CliResult<(f64, usize, f64)>> = par_map(sigmas, |&s| {
                let tt = t.max((10.0 * (s / g).powi(2)) as usize);
                let sp = ProductionModelSpec::new(g, NoiseSpec::gaussian(s)?, 0.0)?;
                let r = narrow_limit_check_with(&sp, tt, EvolveOptions { track_z: false, dx: a.dx, ..Default::default() })?;
                Ok((s, tt, r))
            });
            let mut nt = Table::new(&["sigma", "t", "ratio"]);
            for r in rows {
                let (s, tt, ratio) = r?;
                nt.push(vec![s.into(), tt.into(), ratio.into()]);
            }
            out.table("narrow", &nt)?;
        }
    }
    out.json("summary", &Value::Object(extra.clone()))?;
    let a = ProductionArgs { t: Some(t), snapshots: Some(snapshots), paths: Some(paths), ..a };
    super::finish(out, &rc, "production", &a)
}
