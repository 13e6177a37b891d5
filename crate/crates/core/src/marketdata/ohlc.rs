use crate::error::{Error, Result};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

/// One trading day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OhlcRecord {
    pub date: NaiveDate,
    pub open: f64,
    pub close: f64,
}

/// Trading days in strictly increasing date order with positive prices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OhlcSeries {
    records: Vec<OhlcRecord>,
}

impl OhlcSeries {
    pub fn new(records: Vec<OhlcRecord>) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            if !(r.open > 0.0 && r.close > 0.0 && r.open.is_finite() && r.close.is_finite()) {
                return Err(Error::RejectedInput(format!("day {i}: prices must be positive and finite")));
            }
            if i > 0 && records[i - 1].date >= r.date {
                return Err(Error::RejectedInput(format!("day {i}: dates must be strictly increasing")));
            }
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[OhlcRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Scales every price from day `k` on by `factor`, which moves the overnight
    /// return into day `k` by `ln(factor)` and leaves all others unchanged.
    pub fn with_overnight_jump(&self, k: usize, factor: f64) -> Result<Self> {
        if k == 0 || k >= self.len() || !(factor > 0.0) {
            return Err(Error::RejectedParameters(format!("jump at day {k} by {factor} is not applicable")));
        }
        let mut records = self.records.clone();
        for r in &mut records[k..] {
            r.open *= factor;
            r.close *= factor;
        }
        Self::new(records)
    }

    /// Writes `date,open,high,low,close` with high/low spanning open and close.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["date", "open", "high", "low", "close"])?;
        for r in &self.records {
            out.write_record([
                r.date.format("%Y-%m-%d").to_string(),
                r.open.to_string(),
                r.open.max(r.close).to_string(),
                r.open.min(r.close).to_string(),
                r.close.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Header names of the columns that are read; high and low are ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub date: String,
    pub open: String,
    pub close: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self { date: "date".into(), open: "open".into(), close: "close".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoadOptions {
    pub columns: ColumnMap,
    /// chrono format string; ISO-8601 dates when absent.
    pub date_format: Option<String>,
    /// Without a header the layout `date,open,high,low,close` is assumed.
    pub has_header: bool,
    pub delimiter: u8,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self { columns: ColumnMap::default(), date_format: None, has_header: true, delimiter: b',' }
    }
}

/// What happened during ingestion.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    pub rows_read: usize,
    pub dropped: usize,
    /// 1-based file lines of the dropped rows.
    pub dropped_lines: Vec<usize>,
}

pub fn load_ohlc(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<(OhlcSeries, LoadReport)> {
    read_ohlc(std::fs::File::open(path)?, opts)
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::Parse { line: 1, msg: format!("missing column '{name}'") })
}

fn price(field: Option<&str>, line: usize, name: &str) -> Result<Option<f64>> {
    let s = field.map(str::trim).unwrap_or("");
    if s.is_empty() || s.eq_ignore_ascii_case("nan") || s.eq_ignore_ascii_case("null") {
        return Ok(None);
    }
    let v: f64 = s.parse().map_err(|_| Error::Parse { line, msg: format!("bad {name} value '{s}'") })?;
    Ok((v > 0.0 && v.is_finite()).then_some(v))
}

/// Reads OHLC rows. Rows whose open or close is missing or not positive are
/// dropped and counted; anything else that does not parse is an error.
pub fn read_ohlc<R: Read>(r: R, opts: &LoadOptions) -> Result<(OhlcSeries, LoadReport)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(opts.has_header)
        .delimiter(opts.delimiter)
        .flexible(true)
        .from_reader(r);
    let (di, oi, ci) = if opts.has_header {
        let h = rdr.headers()?.clone();
        (column(&h, &opts.columns.date)?, column(&h, &opts.columns.open)?, column(&h, &opts.columns.close)?)
    } else {
        (0, 1, 4)
    };
    let mut records: Vec<OhlcRecord> = Vec::new();
    let mut report = LoadReport::default();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        report.rows_read += 1;
        let ds = row.get(di).map(str::trim).unwrap_or("");
        let date = match &opts.date_format {
            Some(f) => NaiveDate::parse_from_str(ds, f),
            None => ds.parse::<NaiveDate>(),
        }
        .map_err(|e| Error::Parse { line, msg: format!("bad date '{ds}': {e}") })?;
        let (open, close) = (price(row.get(oi), line, "open")?, price(row.get(ci), line, "close")?);
        let (Some(open), Some(close)) = (open, close) else {
            report.dropped += 1;
            report.dropped_lines.push(line);
            continue;
        };
        if let Some(prev) = records.last() {
            if prev.date >= date {
                return Err(Error::Parse { line, msg: format!("date {date} does not follow {}", prev.date) });
            }
        }
        records.push(OhlcRecord { date, open, close });
    }
    if records.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: records.len() });
    }
    Ok((OhlcSeries { records }, report))
}
