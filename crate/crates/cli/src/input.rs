//! CSV ingestion: one observation per row, optional header row.

use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

use crate::error::CliError;

/// Reads numeric rows from `path`, or standard input when `path` is `None`
/// or `-`. A first row containing any non-numeric cell is a header.
pub fn read_rows(path: Option<&Path>) -> Result<Vec<Vec<f64>>, CliError> {
    let reader: Box<dyn Read> = match path {
        None => Box::new(io::stdin()),
        Some(p) if p == Path::new("-") => Box::new(io::stdin()),
        Some(p) => Box::new(File::open(p).map_err(|e| CliError::Data(format!("cannot open {}: {e}", p.display())))?),
    };
    parse_rows(reader)
}

pub fn parse_rows<R: Read>(reader: R) -> Result<Vec<Vec<f64>>, CliError> {
    let mut csv = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let mut rows = Vec::new();
    for (i, record) in csv.records().enumerate() {
        let record = record.map_err(|e| CliError::Data(format!("malformed CSV: {e}")))?;
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        let parsed: Vec<Option<f64>> = record.iter().map(parse_cell).collect();
        if parsed.iter().any(Option::is_none) {
            if i == 0 {
                continue;
            }
            let (col, cell) = record.iter().enumerate().find(|(_, c)| parse_cell(c).is_none()).unwrap();
            return Err(CliError::Data(format!("row {}, column {}: {cell:?} is not a number", i + 1, col + 1)));
        }
        rows.push(parsed.into_iter().map(Option::unwrap).collect::<Vec<f64>>());
    }
    if let Some(first) = rows.first() {
        let d = first.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != d) {
            return Err(CliError::Data(format!(
                "ragged input: data row {} has {} columns, expected {d}",
                bad + 1,
                rows[bad].len()
            )));
        }
    }
    Ok(rows)
}

/// Dot-decimal number, independent of locale.
fn parse_cell(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok()
}

/// Comma-separated coordinates as given on the command line.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("{t:?} is not a finite number")))
        })
        .collect()
}
