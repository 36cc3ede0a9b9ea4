//! CSV files with a `#`-prefixed JSON metadata line: time series and grid
//! snapshots.

use crate::error::{Error, Result};
use crate::evolve::EquivariantState;
use crate::fields::AnsatzProfiles;
use crate::geometry::Background;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

pub const SNAPSHOT_VERSION: u32 = 1;

/// Columns of numbers under a JSON metadata header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub meta: serde_json::Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn write_table<W: Write>(w: W, meta: &serde_json::Value, columns: &[String], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = std::io::BufWriter::new(w);
    let head = serde_json::to_string(meta).map_err(|e| Error::Config(e.to_string()))?;
    writeln!(w, "# {head}")?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(columns).map_err(csv_io)?;
    for r in rows {
        if r.len() != columns.len() {
            return Err(Error::Config(format!("row of {} values under {} columns", r.len(), columns.len())));
        }
        // `{:?}` round-trips f64 exactly.
        csv.write_record(r.iter().map(|v| format!("{v:?}"))).map_err(csv_io)?;
    }
    csv.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        k => Error::Config(format!("{k:?}")),
    }
}

pub fn read_table<R: BufRead>(mut r: R) -> Result<Table> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let head = first.trim_end_matches(['\n', '\r']);
    let json = head.strip_prefix('#').ok_or_else(|| parse_err(1, "expected a `#` metadata line"))?;
    let meta: serde_json::Value = serde_json::from_str(json.trim()).map_err(|e| parse_err(1, format!("metadata: {e}")))?;
    let mut csv = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let columns: Vec<String> = csv
        .headers()
        .map_err(|e| parse_err(2, e.to_string()))?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    if columns.is_empty() || columns.iter().any(|c| c.is_empty()) {
        return Err(parse_err(2, "empty column name"));
    }
    let mut rows = Vec::new();
    for (k, rec) in csv.records().enumerate() {
        let line = k + 3;
        let rec = rec.map_err(|e| parse_err(line, e.to_string()))?;
        let row = rec
            .iter()
            .map(|v| v.trim().parse::<f64>().map_err(|_| parse_err(line, format!("not a number: {v:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Table { meta, columns, rows })
}

/// Metadata line of a snapshot file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotMeta {
    pub version: u32,
    pub background: Background,
    pub ansatz: AnsatzProfiles,
    pub rho_max: f64,
    pub lambda: f64,
    pub time: f64,
    pub active: usize,
}

pub fn write_snapshot<W: Write>(w: W, s: &EquivariantState) -> Result<()> {
    let meta = SnapshotMeta {
        version: SNAPSHOT_VERSION,
        background: s.background,
        ansatz: s.ansatz,
        rho_max: s.rho_max,
        lambda: s.lambda,
        time: s.time,
        active: s.active,
    };
    let names = s.field_names();
    let mut columns = vec!["rho".to_string()];
    columns.extend(names.iter().map(|n| n.to_string()));
    columns.extend(names.iter().map(|n| format!("p_{n}")));
    let rows: Vec<Vec<f64>> = (0..=s.n())
        .map(|i| {
            let mut r = vec![s.rho(i)];
            r.extend(s.q.iter().map(|q| q[i]));
            r.extend(s.p.iter().map(|p| p[i]));
            r
        })
        .collect();
    let meta = serde_json::to_value(meta).map_err(|e| Error::Config(e.to_string()))?;
    write_table(w, &meta, &columns, &rows)
}

pub fn read_snapshot<R: BufRead>(r: R) -> Result<EquivariantState> {
    let t = read_table(r)?;
    let meta: SnapshotMeta = serde_json::from_value(t.meta.clone()).map_err(|e| parse_err(1, format!("snapshot metadata: {e}")))?;
    if meta.version != SNAPSHOT_VERSION {
        return Err(parse_err(1, format!("unsupported snapshot version {}", meta.version)));
    }
    let probe = EquivariantState::vacuum(meta.background, meta.ansatz, 8, meta.rho_max.max(1.0), 0.0)?;
    let names = probe.field_names();
    let nf = names.len();
    if t.columns.len() != 1 + 2 * nf || t.columns[0] != "rho" {
        return Err(parse_err(2, format!("expected rho and {} field columns", 2 * nf)));
    }
    for (k, n) in names.iter().enumerate() {
        if t.columns[1 + k] != *n || t.columns[1 + nf + k] != format!("p_{n}") {
            return Err(parse_err(2, format!("column {} should be {n}", 1 + k)));
        }
    }
    for (k, row) in t.rows.iter().enumerate() {
        if row.len() != t.columns.len() {
            return Err(parse_err(k + 3, "wrong number of fields"));
        }
    }
    let n = t.rows.len().checked_sub(1).filter(|&n| n >= 8).ok_or_else(|| parse_err(3, "snapshot needs at least 9 nodes"))?;
    if meta.active > n {
        return Err(parse_err(1, format!("active node {} beyond the grid", meta.active)));
    }
    let q: Vec<Vec<f64>> = (0..nf).map(|f| t.rows.iter().map(|r| r[1 + f]).collect()).collect();
    let p: Vec<Vec<f64>> = (0..nf).map(|f| t.rows.iter().map(|r| r[1 + nf + f]).collect()).collect();
    let s = EquivariantState {
        background: meta.background,
        ansatz: meta.ansatz,
        rho_max: meta.rho_max,
        lambda: meta.lambda,
        time: meta.time,
        q,
        p,
        active: meta.active,
    };
    for (i, row) in t.rows.iter().enumerate() {
        if (row[0] - s.rho(i)).abs() > 1e-9 * s.rho_max.max(1.0) {
            return Err(parse_err(i + 3, format!("ρ = {} off the uniform grid", row[0])));
        }
    }
    if !(s.rho_max > 0.0 && s.rho_max.is_finite() && s.time.is_finite()) {
        return Err(parse_err(1, "invalid grid extent or time"));
    }
    if s.q.iter().chain(&s.p).flatten().any(|v| !v.is_finite()) {
        return Err(Error::Invariant("snapshot holds non-finite values".into()));
    }
    s.check_invariants()?;
    Ok(s)
}

/// Reads `(x, y)` pairs from two named columns of a series file.
pub fn read_series_pair<R: BufRead>(r: R, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
    let t = read_table(r)?;
    let xs = t.column(x).ok_or_else(|| Error::Config(format!("no column {x:?}")))?;
    let ys = t.column(y).ok_or_else(|| Error::Config(format!("no column {y:?}")))?;
    Ok(xs.into_iter().zip(ys).collect())
}
