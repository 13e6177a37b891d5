pub mod asymmetry;
pub mod envelope;
pub mod mi;
pub mod parrondo;
pub mod production;
pub mod selfcheck;
pub mod vol;

use crate::config::Resolved;
use crate::error::{invalid, CliResult};
use crate::output::Outputs;
use serde::Serialize;
use std::path::PathBuf;
use stochlab::marketdata::{load_ohlc, synthetic_ohlc, ColumnMap, Coupling, LoadOptions, LoadReport, OhlcSeries};

/// Where OHLC rows come from: a file, or a synthetic generator.
#[derive(Debug, Clone, Default)]
pub struct MarketSource {
    pub input: Option<PathBuf>,
    pub date_format: Option<String>,
    pub columns: Option<Vec<String>>,
    pub synthetic: Option<String>,
    pub days: Option<usize>,
    pub sigma: Option<f64>,
    pub eps: Option<f64>,
}

/// Declares an argument struct carrying the OHLC source flags plus its own.
macro_rules! market_args {
    ($(#[$meta:meta])* pub struct $name:ident { $($(#[$fmeta:meta])* pub $f:ident: $t:ty,)* }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Default, clap::Args, serde::Serialize, serde::Deserialize)]
        #[serde(deny_unknown_fields, default)]
        pub struct $name {
            /// OHLC CSV file
            #[arg(long)]
            pub input: Option<std::path::PathBuf>,
            /// chrono date format of the input (ISO dates when absent)
            #[arg(long)]
            pub date_format: Option<String>,
            /// Header names of the date, open and close columns
            #[arg(long, value_delimiter = ',', num_args = 1)]
            pub columns: Option<Vec<String>>,
            /// Synthetic coupling instead of a file: night_to_day, day_to_night, independent
            #[arg(long)]
            pub synthetic: Option<String>,
            /// Trading days of synthetic data
            #[arg(long)]
            pub days: Option<usize>,
            /// Return scale of synthetic data
            #[arg(long)]
            pub sigma: Option<f64>,
            /// Echo noise of synthetic data
            #[arg(long)]
            pub eps: Option<f64>,
            $($(#[$fmeta])* pub $f: $t,)*
        }

        crate::config::impl_merge!($name { input, date_format, columns, synthetic, days, sigma, eps, $($f),* });

        impl $name {
            fn source(&self) -> super::MarketSource {
                super::MarketSource {
                    input: self.input.clone(),
                    date_format: self.date_format.clone(),
                    columns: self.columns.clone(),
                    synthetic: self.synthetic.clone(),
                    days: self.days,
                    sigma: self.sigma,
                    eps: self.eps,
                }
            }
        }
    };
}
pub(crate) use market_args;

impl MarketSource {
    pub fn load(&self, seed: u64) -> CliResult<(OhlcSeries, Option<LoadReport>)> {
        match (&self.input, &self.synthetic) {
            (Some(_), Some(_)) => invalid("give either --input or --synthetic, not both"),
            (None, None) => invalid("need --input FILE or --synthetic COUPLING"),
            (Some(path), None) => {
                if !path.is_file() {
                    return invalid(format!("input file {} not found", path.display()));
                }
                let mut opts = LoadOptions { date_format: self.date_format.clone(), ..Default::default() };
                if let Some(c) = &self.columns {
                    if c.len() != 3 {
                        return invalid("--columns needs three names: date,open,close");
                    }
                    opts.columns = ColumnMap { date: c[0].clone(), open: c[1].clone(), close: c[2].clone() };
                }
                let (s, rep) = load_ohlc(path, &opts)?;
                Ok((s, Some(rep)))
            }
            (None, Some(kind)) => {
                let coupling = match kind.replace('-', "_").as_str() {
                    "night_to_day" => Coupling::NightToDay,
                    "day_to_night" => Coupling::DayToNight,
                    "independent" => Coupling::Independent,
                    _ => return invalid(format!("unknown coupling {kind:?}")),
                };
                let s = synthetic_ohlc(
                    coupling,
                    self.days.unwrap_or(1000),
                    self.sigma.unwrap_or(0.01),
                    self.eps.unwrap_or(0.001),
                    seed,
                )?;
                Ok((s, None))
            }
        }
    }
}

/// Writes the manifest and lists the artifacts on stdout.
pub fn finish<A: Serialize>(out: Outputs, rc: &Resolved, subcommand: &str, args: &A) -> CliResult<()> {
    let config = serde_json::json!({ "common": rc, subcommand: args });
    for name in out.finish(subcommand, config)? {
        println!("{}", rc.out_dir.join(name).display());
    }
    Ok(())
}
