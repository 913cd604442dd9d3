//! Report emission and loading.
//!
//! Every CSV starts with two comment lines, `# fingerprint=<hex>` and `# schema=<n>`, then
//! a fixed header. Floats use Rust's shortest round-trip formatting, so identical inputs
//! give identical bytes. The only non-deterministic value, the wall-clock timestamp, lives
//! in the `meta` block of `summary.json`.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Rule};

pub const CSV_SCHEMA: u32 = 1;

/// One named table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&'static str]) -> Self {
        Self {
            name: name.into(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the `{}` header", self.name);
        self.rows.push(row.into_iter().map(|c| c.0).collect());
    }
}

/// A formatted CSV field.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell(pub String);

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell(format!("{v}"))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell(v.to_string())
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell(v.to_string())
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell(v)
    }
}

#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($crate::report::Cell::from($x)),*] };
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Everything a subcommand produces.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<Table>,
    /// Tidy long-format tables, written only with `--emit-plot-data`.
    pub plot_tables: Vec<Table>,
    /// Subcommand-specific JSON payload for `summary.json`.
    pub details: Value,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta<'a> {
    pub subcommand: &'a str,
    pub fingerprint: &'a str,
    pub seed: u64,
    pub version: &'static str,
    pub timestamp: String,
}

/// Writes `summary.json` and one CSV per table into `dir`, returning the CSV paths.
pub fn write_outcome(dir: &Path, meta: &Meta<'_>, outcome: &Outcome, emit_plot_data: bool) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    let plots: &[Table] = if emit_plot_data { &outcome.plot_tables } else { &[] };
    for table in outcome.tables.iter().chain(plots) {
        let path = dir.join(format!("{}.csv", table.name));
        fs::write(&path, render_csv(meta.fingerprint, table)).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    let failures: Vec<&Verdict> = outcome.verdicts.iter().filter(|v| !v.pass).collect();
    let summary = serde_json::json!({
        "meta": meta,
        "pass": outcome.pass(),
        "verdicts": outcome.verdicts,
        "failures": failures,
        "details": outcome.details,
    });
    let path = dir.join("summary.json");
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
    Ok(written)
}

pub fn render_csv(fingerprint: &str, table: &Table) -> String {
    let mut out = format!("# fingerprint={fingerprint}\n# schema={CSV_SCHEMA}\n");
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(&table.header).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
    out
}

/// A CSV read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedTable {
    pub path: PathBuf,
    pub fingerprint: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl LoadedTable {
    /// Column `name` parsed as floats.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[idx].parse().ok()).collect()
    }
}

pub fn load_table(path: &Path) -> Result<LoadedTable, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut fingerprint = None;
    let mut body = String::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if let Some(meta) = line.strip_prefix('#') {
            if let Some(fp) = meta.trim().strip_prefix("fingerprint=") {
                fingerprint = Some(fp.to_string());
            }
            continue;
        }
        body.push_str(&line);
        body.push('\n');
    }
    let fingerprint =
        fingerprint.ok_or_else(|| CliError::new(Rule::MixedFingerprint, format!("{} has no fingerprint line", path.display())))?;
    let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let bad = |e: csv::Error| CliError::new(Rule::Io, format!("{}: {e}", path.display()));
    let header = reader.headers().map_err(bad)?.iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()
        .map_err(bad)?;
    Ok(LoadedTable {
        path: path.to_path_buf(),
        fingerprint,
        header,
        rows,
    })
}

/// Loads several tables for joint analysis; all of them must come from the same run
/// configuration.
pub fn load_consistent(paths: &[PathBuf]) -> Result<Vec<LoadedTable>, CliError> {
    let tables: Vec<LoadedTable> = paths.iter().map(|p| load_table(p)).collect::<Result<_, _>>()?;
    if let Some(first) = tables.first() {
        if let Some(other) = tables.iter().find(|t| t.fingerprint != first.fingerprint) {
            return Err(CliError::new(
                Rule::MixedFingerprint,
                format!(
                    "{} has fingerprint {} but {} has {}",
                    first.path.display(),
                    first.fingerprint,
                    other.path.display(),
                    other.fingerprint
                ),
            ));
        }
    }
    Ok(tables)
}
