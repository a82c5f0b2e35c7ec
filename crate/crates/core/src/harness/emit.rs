// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON emission of sweep rows.
//!
//! CSV cells carry 17 significant digits (round-trip exact); an absent value
//! is an empty cell. JSON is an array of objects with the same field names
//! and `null` for absent values. Both use LF line endings.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::config::Format;
use super::run::{SweepRow, COLUMNS};

fn format_cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| format!("{v:.16e}"))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row.values().map(format_cell))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")
        .map_err(|e| Error::Json(serde_json::Error::io(e)))?;
    Ok(())
}

pub fn write_rows<W: Write>(rows: &[SweepRow], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}

pub fn render(rows: &[SweepRow], format: Format) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_rows(rows, format, &mut buf)?;
    Ok(buf)
}

/// Writes `rows` to `path`, creating or truncating it.
pub fn emit(rows: &[SweepRow], format: Format, path: &Path) -> Result<()> {
    let bytes = render(rows, format)?;
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_cell(cell: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse()
        .map(Some)
        .map_err(|e| Error::Config(format!("bad numeric cell `{cell}`: {e}")))
}

/// Parses CSV produced by [`write_csv`].
pub fn read_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != COLUMNS {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    let required = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Error::Config(format!("missing value in column `{name}`")))
    };
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let v: Vec<Option<f64>> = record.iter().map(parse_cell).collect::<Result<_>>()?;
        if v.len() != COLUMNS.len() {
            return Err(Error::Config(format!("row has {} cells", v.len())));
        }
        rows.push(SweepRow {
            delta: required(v[0], COLUMNS[0])?,
            n_b: required(v[1], COLUMNS[1])?,
            intensity: required(v[2], COLUMNS[2])?,
            temperature: required(v[3], COLUMNS[3])?,
            x: v[4],
            residual: v[5],
            n_ii: v[6],
            n_ss: v[7],
            n_ssp: v[8],
            abs_n_is: v[9],
            stability_margin: required(v[10], COLUMNS[10])?,
        });
    }
    Ok(rows)
}

pub fn read_json(text: &str) -> Result<Vec<SweepRow>> {
    Ok(serde_json::from_str(text)?)
}
