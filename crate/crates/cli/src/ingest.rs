//! Reading raw observations and correlation matrices from CSV.

use std::fs::File;
use std::path::{Path, PathBuf};

use facpca_core::stats::{CorrelationMatrix, DataMatrix};
use nalgebra::DMatrix;

use crate::config::InputKind;
use crate::error::{io_error, CliError, Result};

/// Asymmetry and diagonal deviation tolerated in a correlation file.
const CORRELATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Raw(RawInput),
    Correlation(CorrelationMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawInput {
    pub data: DataMatrix,
    /// Rows skipped because a cell was empty or not a number.
    pub dropped: usize,
}

pub fn ingest(path: &Path, kind: InputKind) -> Result<Input> {
    match kind {
        InputKind::RawCsv => read_raw(path).map(Input::Raw),
        InputKind::CorrelationCsv => read_correlation(path).map(Input::Correlation),
    }
}

struct Records {
    path: PathBuf,
    header: Vec<String>,
    reader: csv::Reader<File>,
}

fn open(path: &Path) -> Result<Records> {
    let file = File::open(path).map_err(io_error(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.iter().all(String::is_empty) {
        return Err(CliError::Parse {
            path: path.to_owned(),
            line: 1,
            message: "missing header row".into(),
        });
    }
    Ok(Records {
        path: path.to_owned(),
        header,
        reader,
    })
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    CliError::Parse {
        path: path.to_owned(),
        line,
        message: e.to_string(),
    }
}

impl Records {
    /// Yields `(line, fields)` and rejects rows with the wrong number of fields.
    fn rows(&mut self) -> impl Iterator<Item = Result<(u64, csv::StringRecord)>> + '_ {
        let expected = self.header.len();
        let path = self.path.clone();
        self.reader.records().map(move |rec| {
            let rec = rec.map_err(|e| csv_error(&path, e))?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() != expected {
                return Err(CliError::Parse {
                    path: path.clone(),
                    line,
                    message: format!("expected {expected} fields, found {}", rec.len()),
                });
            }
            Ok((line, rec))
        })
    }

    fn data_error(&self, message: impl Into<String>) -> CliError {
        CliError::Data {
            path: self.path.clone(),
            message: message.into(),
        }
    }
}

fn number(field: &str) -> Option<f64> {
    field.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn read_raw(path: &Path) -> Result<RawInput> {
    let mut records = open(path)?;
    let n = records.header.len();
    let mut columns = vec![Vec::new(); n];
    let mut dropped = 0;
    for row in records.rows() {
        let (_, rec) = row?;
        let parsed: Option<Vec<f64>> = rec.iter().map(number).collect();
        match parsed {
            Some(values) => {
                for (col, v) in columns.iter_mut().zip(values) {
                    col.push(v);
                }
            }
            None => dropped += 1,
        }
    }
    let data = DataMatrix::from_columns(&columns, records.header.clone())
        .map_err(|e| records.data_error(e.to_string()))?;
    Ok(RawInput { data, dropped })
}

/// Reads a labelled correlation matrix. Small asymmetries are averaged away
/// and a diagonal within tolerance of 1 is set to exactly 1.
pub fn read_correlation(path: &Path) -> Result<CorrelationMatrix> {
    let mut records = open(path)?;
    let labels: Vec<String> = records.header[1..].to_vec();
    let n = labels.len();
    if n == 0 {
        return Err(records.data_error("header names no variables"));
    }
    let mut entries = DMatrix::zeros(n, n);
    let mut count = 0;
    let mut rows = Vec::new();
    for row in records.rows() {
        rows.push(row?);
    }
    for (line, rec) in rows {
        if count == n {
            return Err(records.data_error(format!("more than {n} rows (line {line})")));
        }
        if rec[0] != labels[count] {
            return Err(records.data_error(format!(
                "row {} is labelled `{}` but column {} is `{}`",
                count + 1,
                &rec[0],
                count + 1,
                labels[count]
            )));
        }
        for j in 0..n {
            entries[(count, j)] = number(&rec[j + 1]).ok_or_else(|| CliError::Parse {
                path: path.to_owned(),
                line,
                message: format!("`{}` is not a number", &rec[j + 1]),
            })?;
        }
        count += 1;
    }
    if count != n {
        return Err(records.data_error(format!("expected {n} rows, found {count}")));
    }

    for i in 0..n {
        if (entries[(i, i)] - 1.0).abs() > CORRELATION_TOL {
            return Err(records.data_error(format!(
                "unit diagonal violated: entry ({0}, {0}) is {1}",
                labels[i],
                entries[(i, i)]
            )));
        }
        entries[(i, i)] = 1.0;
        for j in (i + 1)..n {
            let (a, b) = (entries[(i, j)], entries[(j, i)]);
            if (a - b).abs() > CORRELATION_TOL {
                return Err(records.data_error(format!(
                    "symmetry violated: ({}, {}) is {a} but ({}, {}) is {b}",
                    labels[i], labels[j], labels[j], labels[i]
                )));
            }
            let mean = 0.5 * (a + b);
            entries[(i, j)] = mean;
            entries[(j, i)] = mean;
        }
    }
    CorrelationMatrix::new(entries, labels).map_err(|e| records.data_error(e.to_string()))
}
