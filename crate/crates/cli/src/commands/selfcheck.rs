use crate::config::{impl_merge, resolve, CommonArgs};
use crate::error::{CliError, CliResult};
use crate::output::{Outputs, Table};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use stochlab::infotheory::*;
use stochlab::parrondo::*;
use stochlab::production::*;
use stochlab::sharding::shard_rng;

#[derive(Debug, Clone, Default, clap::Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SelfcheckArgs {
    /// Random ladder specs per invariant
    #[arg(long)]
    pub specs: Option<usize>,
}

impl_merge!(SelfcheckArgs { specs });

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn random_spec(rng: &mut impl Rng, holdless: bool) -> GameSpec {
    let m = rng.random_range(1..=6usize);
    let (mut p, mut q) = (Vec::new(), Vec::new());
    for _ in 0..m {
        if holdless {
            let v = rng.random_range(0.01..0.99);
            p.push(v);
            q.push(1.0 - v);
        } else {
            let (a, b, c): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
            let s = a + b + c + 1e-9;
            p.push(a / s);
            q.push(b / s);
        }
    }
    GameSpec::new(p, q).expect("valid by construction")
}

fn checks(seed: u64, specs: usize) -> stochlab::Result<Vec<Check>> {
    let mut out = Vec::new();

    let uniform = GameSpec::uniform(3, 0.495)?;
    let capital = GameSpec::capital_dependent(3, 0.095, 0.745)?;
    let mix = rate_variance(&mix_strategies(&uniform, &capital)?)?;
    let (ru, rc) = (rate_variance(&uniform)?.r, rate_variance(&capital)?.r);
    out.push(Check {
        name: "three-rung Parrondo effect",
        pass: ru < 0.0 && rc < 0.0 && (mix.r - 0.005234741795).abs() < 1e-9,
        detail: format!("r = {ru:.6}, {rc:.6}, mix {:.12}", mix.r),
    });

    let mut rng = shard_rng(seed, 0);
    let (mut spread, mut pmf, mut mass) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..specs {
        let g = random_spec(&mut rng, false);
        spread = spread.max(rate_formulas(&g)?.spread());
        let t = rng.random_range(0..=60usize);
        let d = iterate(&g, t);
        pmf = pmf.max(exact_pmf(&g, t).sup_distance(&d));
        mass = mass.max((d.total_mass() - 1.0).abs());
    }
    out.push(Check { name: "rate formulas agree", pass: spread < 1e-10, detail: format!("spread {spread:.1e}") });
    out.push(Check { name: "exact PMF equals master equation", pass: pmf < 1e-10, detail: format!("sup {pmf:.1e}") });
    out.push(Check { name: "mass conservation", pass: mass < 1e-12, detail: format!("{mass:.1e}") });

    let mut violations = 0;
    for _ in 0..specs {
        let g = random_spec(&mut rng, true);
        let t = rng.random_range(0..=50usize);
        let d = iterate(&g, t);
        let m = g.m() as i64;
        for n in d.n_min()..=d.n_max() {
            for l in 0..g.m() {
                if (l as i64 + n * m + t as i64).rem_euclid(2) == 1 && d.get(n, l) != 0.0 {
                    violations += 1;
                }
            }
        }
    }
    out.push(Check { name: "parity support law", pass: violations == 0, detail: format!("{violations} violations") });

    let spec = EnvelopeSpec::new(AmountLaw::delta(1.0), SwitchingFunction::Table { x: vec![1.0, 2.0], p: vec![0.2, 0.3] });
    let mo = envelope_moments(&spec)?;
    out.push(Check {
        name: "two-envelope moments",
        pass: (mo.r - 1.45).abs() < 1e-12 && (mo.v - 0.2475).abs() < 1e-12,
        detail: format!("r {} v {}", mo.r, mo.v),
    });

    let ps = ProductionModelSpec::gaussian(0.2, 0.05)?;
    let ratio = narrow_limit_check(&ps, 400)?;
    out.push(Check { name: "tanh law on the grid", pass: (ratio - 1.0).abs() < 0.01, detail: format!("σ ratio {ratio:.5}") });
    let st = evolve_to(&ps, 50, EvolveOptions::default())?;
    let leak = (st.mass_before_normalization() - 1.0).abs();
    out.push(Check { name: "recursion conserves mass", pass: leak < 1e-6, detail: format!("{leak:.1e}") });

    let x: Vec<f64> = (0..800).map(|i| (i % 8) as f64).collect();
    let lnm = mi_histogram(&PairedSamples::new(x.clone(), x)?, 8)?.value;
    out.push(Check {
        name: "histogram MI of X with itself",
        pass: (lnm - 8f64.ln()).abs() < 1e-12,
        detail: format!("{lnm:.12} vs ln 8"),
    });
    let ar = ar1_generate(0.8, 0.0, 1.0, 2000, seed)?.pairs()?;
    let knn = mi_knn(&ar, 5, KnnAlgorithm::One)?.value;
    let truth = gaussian_mi(0.8)?;
    out.push(Check { name: "KNN MI on AR(1)", pass: (knn - truth).abs() < 0.1, detail: format!("{knn:.4} vs {truth:.4}") });
    let xs: Vec<f64> = ar.x().to_vec();
    let fx: Vec<f64> = xs.iter().map(|v| v.powi(3) + v).collect();
    let a = spearman(&PairedSamples::new(xs, ar.y().to_vec())?)?;
    let b = spearman(&PairedSamples::new(fx, ar.y().to_vec())?)?;
    out.push(Check { name: "Spearman monotone invariance", pass: a == b, detail: format!("{a:.6}") });
    Ok(out)
}

pub fn run(common: CommonArgs, args: SelfcheckArgs) -> CliResult<()> {
    let (rc, a) = resolve(common, args)?;
    let specs = a.specs.unwrap_or(100);
    let mut out = Outputs::new(rc.out_dir.clone(), rc.format, rc.emit.as_deref(), &["selfcheck"])?;
    let results = checks(rc.seed, specs)?;
    let mut t = Table::new(&["check", "status", "detail"]);
    let width = results.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &results {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!("{:<width$}  {status}  {}", c.name, c.detail);
        t.push(vec![c.name.into(), status.into(), c.detail.clone().into()]);
    }
    out.table("selfcheck", &t)?;
    let failed = results.iter().filter(|c| !c.pass).count();
    out.json("summary", &json!({ "checks": results.len(), "failed": failed }))?;
    super::finish(out, &rc, "selfcheck", &SelfcheckArgs { specs: Some(specs) })?;
    if failed > 0 {
        return Err(CliError::SelfcheckFailed { failed });
    }
    Ok(())
}
