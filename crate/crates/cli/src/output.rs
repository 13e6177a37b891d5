use crate::error::{CliError, CliResult};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::I(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::I(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::F(v) if v.is_nan() => String::new(),
            Cell::F(v) if *v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e15) => format!("{v:e}"),
            Cell::F(v) => format!("{v}"),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::I(v) => json!(v),
            Cell::S(s) => json!(s),
        }
    }
}

/// A rectangular plot-ready table.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_columns(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write(&self, path: &Path, format: Format) -> CliResult<()> {
        let mut f = std::io::BufWriter::new(fs::File::create(path)?);
        match format {
            Format::Csv => {
                writeln!(f, "{}", self.columns.join(","))?;
                for r in &self.rows {
                    let line: Vec<String> = r.iter().map(Cell::text).collect();
                    writeln!(f, "{}", line.join(","))?;
                }
            }
            Format::Json => {
                let rows: Vec<Vec<Value>> = self.rows.iter().map(|r| r.iter().map(Cell::json).collect()).collect();
                serde_json::to_writer_pretty(&mut f, &json!({ "columns": self.columns, "rows": rows }))?;
                writeln!(f)?;
            }
        }
        f.flush()?;
        Ok(())
    }
}

/// Artifact sink for one run: applies `--emit` filtering and records what was written.
pub struct Outputs {
    dir: PathBuf,
    format: Format,
    /// stem → explicit format, when `--emit` was given
    emit: Option<BTreeMap<String, Option<Format>>>,
    written: Vec<String>,
}

impl Outputs {
    pub fn new(dir: PathBuf, format: Format, emit: Option<&str>, known: &[&str]) -> CliResult<Self> {
        let emit = match emit {
            None => None,
            Some(list) => {
                let mut m = BTreeMap::new();
                for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let (stem, fmt) = match item.rsplit_once('.') {
                        Some((s, "csv")) => (s, Some(Format::Csv)),
                        Some((s, "json")) => (s, Some(Format::Json)),
                        Some(_) => return Err(CliError::Invalid(format!("unsupported artifact extension in {item:?}"))),
                        None => (item, None),
                    };
                    if stem != "summary" && stem != "manifest" && !known.contains(&stem) {
                        return Err(CliError::Invalid(format!(
                            "unknown artifact {item:?}; this subcommand emits {}",
                            known.join(", ")
                        )));
                    }
                    m.insert(stem.to_string(), fmt);
                }
                Some(m)
            }
        };
        fs::create_dir_all(&dir)?;
        Ok(Self { dir, format, emit, written: Vec::new() })
    }

    pub fn wants(&self, stem: &str) -> bool {
        self.emit.as_ref().is_none_or(|m| m.contains_key(stem))
    }

    pub fn table(&mut self, stem: &str, t: &Table) -> CliResult<()> {
        if !self.wants(stem) {
            return Ok(());
        }
        let fmt = self.emit.as_ref().and_then(|m| m.get(stem).copied().flatten()).unwrap_or(self.format);
        let name = format!("{stem}.{}", fmt.ext());
        t.write(&self.dir.join(&name), fmt)?;
        self.written.push(name);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, stem: &str, value: &T) -> CliResult<()> {
        let name = format!("{stem}.json");
        let mut f = std::io::BufWriter::new(fs::File::create(self.dir.join(&name))?);
        serde_json::to_writer_pretty(&mut f, value)?;
        writeln!(f)?;
        f.flush()?;
        self.written.push(name);
        Ok(())
    }

    /// Writes `manifest.json` echoing the resolved configuration. No clock values,
    /// so identical inputs give identical bytes.
    pub fn finish(mut self, subcommand: &str, config: Value) -> CliResult<Vec<String>> {
        let manifest = json!({
            "tool": "stochlab",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": subcommand,
            "config": config,
            "artifacts": self.written,
        });
        self.json("manifest", &manifest)?;
        Ok(self.written)
    }
}
