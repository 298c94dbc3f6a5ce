//! Descriptive statistics, standardization and Pearson correlation.
//!
//! Dispersion uses the biased estimator (divisor `m`, the number of
//! observations), so a standardized column has `Σx²/m = 1`. Users used to
//! the `m − 1` convention will see standard deviations smaller by a factor
//! `sqrt((m − 1)/m)`; correlations are unaffected.

use std::collections::HashSet;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::sum::{compensated_sum, CompensatedSum};

/// Observations in rows, variables in columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: DMatrix<f64>,
    labels: Vec<String>,
}

impl DataMatrix {
    pub fn new(values: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        let (m, n) = values.shape();
        if m < 2 {
            return Err(Error::Size(format!(
                "need at least 2 observations, got {m}"
            )));
        }
        if n < 1 {
            return Err(Error::Size("need at least one variable".into()));
        }
        check_labels(&labels, n)?;
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            // column-major storage
            let (row, col) = (pos % m, pos / m);
            return Err(Error::Data(format!(
                "non-finite value at row {row}, column `{}`",
                labels[col]
            )));
        }
        Ok(Self { values, labels })
    }

    /// Builds a matrix from per-variable columns of equal length.
    pub fn from_columns(columns: &[Vec<f64>], labels: Vec<String>) -> Result<Self> {
        let n = columns.len();
        let m = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != m) {
            return Err(Error::Size("columns have different lengths".into()));
        }
        let values = DMatrix::from_fn(m, n, |i, j| columns[j][i]);
        Self::new(values, labels)
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn cols(&self) -> usize {
        self.values.ncols()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        let m = self.rows();
        &self.values.as_slice()[j * m..(j + 1) * m]
    }

    pub fn into_parts(self) -> (DMatrix<f64>, Vec<String>) {
        (self.values, self.labels)
    }
}

fn check_labels(labels: &[String], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::Size(format!(
            "expected {n} labels, got {}",
            labels.len()
        )));
    }
    let mut seen = HashSet::with_capacity(n);
    for label in labels {
        if !seen.insert(label.as_str()) {
            return Err(Error::Data(format!("duplicate label `{label}`")));
        }
    }
    Ok(())
}

/// Location and dispersion of a single variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableStats {
    pub mean: f64,
    pub median: f64,
    pub mode: f64,
    /// Biased standard deviation (divisor `m`).
    pub std_dev: f64,
    pub minimum: f64,
    pub maximum: f64,
}

/// Summary statistics of one column.
///
/// The median of an even-length column is the midpoint of the two central
/// values. The mode is the most frequent exact value; ties go to the smallest.
pub fn summarize(column: &[f64]) -> Result<VariableStats> {
    if column.len() < 2 {
        return Err(Error::Size(format!(
            "need at least 2 observations, got {}",
            column.len()
        )));
    }
    if let Some(i) = column.iter().position(|v| !v.is_finite()) {
        return Err(Error::Data(format!("non-finite value at position {i}")));
    }

    let (mean, std_dev) = mean_and_std(column);

    let mut sorted = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let median = if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    };

    let mut mode = sorted[0];
    let mut best = 0usize;
    let mut start = 0usize;
    while start < m {
        let mut end = start + 1;
        while end < m && sorted[end] == sorted[start] {
            end += 1;
        }
        if end - start > best {
            best = end - start;
            mode = sorted[start];
        }
        start = end;
    }

    Ok(VariableStats {
        mean,
        median,
        mode,
        std_dev,
        minimum: sorted[0],
        maximum: sorted[m - 1],
    })
}

fn mean_and_std(column: &[f64]) -> (f64, f64) {
    let m = column.len() as f64;
    let mean = compensated_sum(column.iter().copied()) / m;
    let var = compensated_sum(column.iter().map(|x| (x - mean) * (x - mean))) / m;
    (mean, var.sqrt())
}

fn is_constant(column: &[f64]) -> bool {
    column.iter().all(|&v| v == column[0])
}

/// Shifts every column to mean 0 and scales it to biased standard deviation 1.
pub fn standardize(data: &DataMatrix) -> Result<DataMatrix> {
    let (m, n) = data.values.shape();
    let mut out = DMatrix::zeros(m, n);
    for j in 0..n {
        let col = data.column(j);
        if is_constant(col) {
            return Err(Error::Degenerate {
                column: data.labels[j].clone(),
                reason: "zero variance".into(),
            });
        }
        let (mean, std_dev) = mean_and_std(col);
        for (i, &x) in col.iter().enumerate() {
            out[(i, j)] = (x - mean) / std_dev;
        }
    }
    DataMatrix::new(out, data.labels.clone())
}

/// Centered copy of a column together with its (compensated) sum of squares.
struct Centered {
    values: Vec<f64>,
    sum_sq: f64,
}

impl Centered {
    fn new(column: &[f64]) -> Self {
        let mean = compensated_sum(column.iter().copied()) / column.len() as f64;
        let values: Vec<f64> = column.iter().map(|x| x - mean).collect();
        let sum_sq = compensated_sum(values.iter().map(|x| x * x));
        Self { values, sum_sq }
    }

    fn correlate(&self, other: &Centered) -> f64 {
        let mut dot = CompensatedSum::default();
        for (a, b) in self.values.iter().zip(&other.values) {
            dot.add(a * b);
        }
        (dot.value() / (self.sum_sq * other.sum_sq).sqrt()).clamp(-1.0, 1.0)
    }
}

/// Pearson correlation: the cosine of the angle between the centered vectors.
pub fn correlation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Size(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::Size("need at least 2 observations".into()));
    }
    for (name, col) in [("first", a), ("second", b)] {
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "{name} argument has a non-finite value"
            )));
        }
        if is_constant(col) {
            return Err(Error::Degenerate {
                column: name.into(),
                reason: "constant input".into(),
            });
        }
    }
    Ok(Centered::new(a).correlate(&Centered::new(b)))
}

/// Symmetric matrix of Pearson correlations with an exact unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    entries: DMatrix<f64>,
    labels: Vec<String>,
}

impl CorrelationMatrix {
    /// Validates symmetry (1e-12), the exact unit diagonal and the `[-1, 1]` range.
    pub fn new(entries: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || r == 0 {
            return Err(Error::Shape(format!(
                "correlation matrix must be square, got {r}x{c}"
            )));
        }
        check_labels(&labels, r)?;
        for i in 0..r {
            if entries[(i, i)] != 1.0 {
                return Err(Error::Data(format!(
                    "diagonal entry for `{}` is {} instead of 1",
                    labels[i],
                    entries[(i, i)]
                )));
            }
            for j in 0..r {
                let v = entries[(i, j)];
                if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
                    return Err(Error::Data(format!(
                        "entry ({}, {}) = {v} outside [-1, 1]",
                        labels[i], labels[j]
                    )));
                }
                if (v - entries[(j, i)]).abs() > 1e-12 {
                    return Err(Error::Data(format!(
                        "not symmetric at ({}, {})",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(Self { entries, labels })
    }

    pub fn identity(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        Self::new(DMatrix::identity(n, n), labels)
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Correlation matrix of all columns, each pair evaluated once.
pub fn correlation_matrix(data: &DataMatrix) -> Result<CorrelationMatrix> {
    let n = data.cols();
    let mut centered = Vec::with_capacity(n);
    for j in 0..n {
        let col = data.column(j);
        if is_constant(col) {
            return Err(Error::Degenerate {
                column: data.labels[j].clone(),
                reason: "zero variance".into(),
            });
        }
        centered.push(Centered::new(col));
    }
    let mut r = DMatrix::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = centered[i].correlate(&centered[j]);
            r[(i, j)] = v;
            r[(j, i)] = v;
        }
    }
    CorrelationMatrix::new(r, data.labels.clone())
}

/// Entrywise squares of the correlations (shared-variance fractions).
pub fn determination_matrix(corr: &CorrelationMatrix) -> DMatrix<f64> {
    corr.entries.map(|r| r * r)
}
