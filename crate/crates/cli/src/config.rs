use crate::error::{invalid, CliResult};
use crate::output::Format;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const DEFAULT_SEED: u64 = 42;

/// Flags shared by every subcommand; in a config file they sit next to the
/// subcommand's own keys.
#[derive(Debug, Clone, Default, clap::Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommonArgs {
    /// Base seed for every random stream
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for emitted artifacts (default `out`)
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Format of emitted tables
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Comma-separated artifact names to write, e.g. `pmf.csv,summary.json`
    #[arg(long, global = true)]
    pub emit: Option<String>,
    /// Flat TOML file of parameters; flags override its values
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub format: Format,
    pub emit: Option<String>,
}

pub trait Merge {
    fn merge(self, file: Self) -> Self;
}

macro_rules! impl_merge {
    ($t:ty { $($f:ident),* $(,)? }) => {
        impl $crate::config::Merge for $t {
            fn merge(self, file: Self) -> Self {
                Self { $($f: self.$f.or(file.$f)),* }
            }
        }
    };
}
pub(crate) use impl_merge;

impl_merge!(CommonArgs { seed, out_dir, format, emit, config });

const COMMON_KEYS: [&str; 4] = ["seed", "out_dir", "format", "emit"];

fn read_table(path: &Path) -> CliResult<toml::Table> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return invalid(format!("cannot read config {}: {e}", path.display())),
    };
    Ok(toml::from_str(&text)?)
}

/// Loads the optional config file and folds it under the flags.
pub fn resolve<A>(common: CommonArgs, args: A) -> CliResult<(Resolved, A)>
where
    A: Merge + DeserializeOwned + Default,
{
    let (file_common, file_args) = match &common.config {
        None => (CommonArgs::default(), A::default()),
        Some(path) => {
            let mut table = read_table(path)?;
            let mut shared = toml::Table::new();
            for k in COMMON_KEYS {
                if let Some(v) = table.remove(k) {
                    shared.insert(k.to_string(), v);
                }
            }
            let c: CommonArgs = toml::Value::Table(shared).try_into()?;
            let a: A = toml::Value::Table(table).try_into()?;
            (c, a)
        }
    };
    let c = common.merge(file_common);
    let resolved = Resolved {
        seed: c.seed.unwrap_or(DEFAULT_SEED),
        out_dir: c.out_dir.unwrap_or_else(|| PathBuf::from("out")),
        format: c.format.unwrap_or_default(),
        emit: c.emit,
    };
    Ok((resolved, args.merge(file_args)))
}

/// `lo:hi:step` or a single value.
pub fn parse_range(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<f64>().or_else(|_| invalid(format!("not a number: {p:?}")));
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [lo, hi, step] => {
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if !(step > 0.0 && hi >= lo) {
                return invalid(format!("bad range {s:?}"));
            }
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| lo + i as f64 * step).collect())
        }
        _ => invalid(format!("expected VALUE or LO:HI:STEP, got {s:?}")),
    }
}

/// `key=value` pairs separated by commas.
pub fn parse_pairs(s: &str) -> CliResult<Vec<(String, String)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| match p.split_once('=') {
            Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
            None => invalid(format!("expected key=value, got {p:?}")),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0.5").unwrap(), vec![0.5]);
        let r = parse_range("0.1:0.9:0.1").unwrap();
        assert_eq!(r.len(), 9);
        assert!((r[8] - 0.9).abs() < 1e-12);
        assert!(parse_range("1:0:0.1").is_err());
        assert!(parse_range("a").is_err());
    }

    #[test]
    fn pairs() {
        let p = parse_pairs("a=0.8, sigma=1").unwrap();
        assert_eq!(p, vec![("a".into(), "0.8".into()), ("sigma".into(), "1".into())]);
        assert!(parse_pairs("a").is_err());
    }
}
