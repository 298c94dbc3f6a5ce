//! How many factors to keep.
//!
//! The classic rules (Kaiser, explained variance, half the variables) look at
//! eigenvalues alone. [`minvar_count`] instead looks at every variable: it
//! adds factors one at a time until the worst-explained variable has at least
//! a fraction `ε` of its variance reproduced.

use crate::eigen::EigenDecomposition;
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

pub const DEFAULT_EPSILON: f64 = 0.51;
/// Slack when comparing a cumulative percentage to its threshold.
const PERCENT_SLACK: f64 = 1e-9;

/// One row of the explained-variance table. Shares are fractions of the
/// number of variables, not percentages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceRow {
    pub eigenvalue: f64,
    pub cumulative: f64,
    pub share: f64,
    pub cumulative_share: f64,
}

/// Every prefix of the minimum-variance rule plus the chosen factor count.
#[derive(Debug, Clone, PartialEq)]
pub struct RetentionReport {
    /// `λ_i / n`.
    pub eig_pct: Vec<f64>,
    /// Smallest communality after `i + 1` factors.
    pub min_var: Vec<f64>,
    /// Mean communality after `i + 1` factors.
    pub aver_var: Vec<f64>,
    /// 1-based index of the variable holding `min_var[i]`; `None` when no
    /// communality is below 1.
    pub nr_min_var: Vec<Option<usize>>,
    pub chosen: usize,
    pub threshold: f64,
}

fn check_sorted(eigenvalues: &[f64]) -> Result<()> {
    for (i, w) in eigenvalues.windows(2).enumerate() {
        if w[1] > w[0] {
            return Err(Error::Order(format!(
                "eigenvalue {} ({}) exceeds eigenvalue {} ({})",
                i + 2,
                w[1],
                i + 1,
                w[0]
            )));
        }
    }
    Ok(())
}

pub fn variance_table(eigenvalues: &[f64]) -> Result<Vec<VarianceRow>> {
    check_sorted(eigenvalues)?;
    let n = eigenvalues.len() as f64;
    let mut acc = CompensatedSum::default();
    Ok(eigenvalues
        .iter()
        .map(|&l| {
            acc.add(l);
            VarianceRow {
                eigenvalue: l,
                cumulative: acc.value(),
                share: l / n,
                cumulative_share: acc.value() / n,
            }
        })
        .collect())
}

/// Number of eigenvalues not less than one.
pub fn kaiser_count(eigenvalues: &[f64]) -> usize {
    eigenvalues.iter().filter(|l| **l >= 1.0).count()
}

/// Smallest count whose cumulative percentage of `n` reaches `threshold_pct`.
pub fn percentage_count(eigenvalues: &[f64], threshold_pct: f64) -> usize {
    let n = eigenvalues.len();
    let mut acc = CompensatedSum::default();
    for (i, &l) in eigenvalues.iter().enumerate() {
        acc.add(l);
        if 100.0 * acc.value() / n as f64 >= threshold_pct - PERCENT_SLACK {
            return i + 1;
        }
    }
    n
}

/// At most half the variables.
pub fn half_count(n: usize) -> usize {
    n / 2
}

/// Minimum per-variable variance rule.
///
/// Loadings are `U·sqrt(Λ)`. Factors are added in eigenvalue order; after
/// each one the running communalities `C_j` are scanned for the smallest
/// value below 1 (strict `<`, so the earliest variable wins a tie). The
/// chosen count is the first prefix whose minimum reaches `epsilon`.
pub fn minvar_count(eig: &EigenDecomposition, epsilon: f64) -> Result<RetentionReport> {
    if !(epsilon > 0.5 && epsilon <= 1.0) {
        return Err(Error::Threshold(epsilon));
    }
    if let Some(&bad) = eig.eigenvalues.iter().find(|l| **l < 0.0) {
        return Err(Error::NotPsd { eigenvalue: bad });
    }
    let n = eig.dim();
    let u = &eig.eigenvectors;

    let mut c = vec![CompensatedSum::default(); n];
    let mut report = RetentionReport {
        eig_pct: eig.eigenvalues.iter().map(|l| l / n as f64).collect(),
        min_var: Vec::with_capacity(n),
        aver_var: Vec::with_capacity(n),
        nr_min_var: Vec::with_capacity(n),
        chosen: n,
        threshold: epsilon,
    };
    let mut chosen = None;

    for (i, lambda) in eig.eigenvalues.iter().enumerate() {
        for (j, cj) in c.iter_mut().enumerate() {
            let l = u[(j, i)] * lambda.sqrt();
            cj.add(l * l);
        }
        let mut nr_var = None;
        let mut min_var = 1.0;
        for (j, cj) in c.iter().enumerate() {
            if cj.value() < min_var {
                min_var = cj.value();
                nr_var = Some(j + 1);
            }
        }
        let mut total = CompensatedSum::default();
        for cj in &c {
            total.add(cj.value());
        }
        report.min_var.push(min_var);
        report.aver_var.push(total.value() / n as f64);
        report.nr_min_var.push(nr_var);
        if chosen.is_none() && min_var >= epsilon {
            chosen = Some(i + 1);
        }
    }
    report.chosen = chosen.unwrap_or(n);
    Ok(report)
}

/// `(1-based index, eigenvalue)` points for a scree plot.
pub fn scree_data(eigenvalues: &[f64]) -> Vec<(usize, f64)> {
    eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &l)| (i + 1, l))
        .collect()
}
