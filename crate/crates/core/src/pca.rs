//! Principal component analysis with the factor count picked by the
//! minimum per-variable variance rule.

use nalgebra::DMatrix;

use crate::eigen::{eigen_correlation, EigenDecomposition};
use crate::error::{Error, Result};
use crate::factor::{full_loadings, truncate, LoadingMatrix};
use crate::retention::{minvar_count, RetentionReport};
use crate::stats::{correlation, correlation_matrix, standardize, DataMatrix};

const ARTIFACT_TOL: f64 = 1e-10;
/// Score columns with a smaller variance are treated as constant.
const ZERO_VARIANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult {
    pub standardized: DataMatrix,
    /// `m×k` principal component values; column `j` has variance `λ_j`.
    pub scores: DMatrix<f64>,
    pub retained: usize,
    pub eig: EigenDecomposition,
    /// Loadings on the retained components (`n×k`).
    pub loadings: LoadingMatrix,
    pub report: RetentionReport,
}

/// `x · U[:, ..k]`.
pub fn project(standardized: &DataMatrix, u: &DMatrix<f64>, k: usize) -> Result<DMatrix<f64>> {
    let n = standardized.cols();
    if u.nrows() != n || u.ncols() < k {
        return Err(Error::Shape(format!(
            "cannot project {n} variables onto a {}x{} basis",
            u.nrows(),
            u.ncols()
        )));
    }
    if k == 0 {
        return Err(Error::Shape("need at least one component".into()));
    }
    Ok(standardized.values() * u.columns(0, k))
}

/// Rescales scores to unit variance (divides column `j` by `sqrt(λ_j)`);
/// columns with a zero eigenvalue become zero.
pub fn standardized_scores(scores: &DMatrix<f64>, eigenvalues: &[f64]) -> DMatrix<f64> {
    let mut out = scores.clone();
    for (mut col, l) in out.column_iter_mut().zip(eigenvalues) {
        if *l > 0.0 {
            col /= l.sqrt();
        } else {
            col.fill(0.0);
        }
    }
    out
}

/// Runs the full pipeline: standardize, correlate, decompose, choose `k`
/// with [`minvar_count`], project. Errors carry the number of the failing step.
pub fn pca_modified(data: &DataMatrix, epsilon: f64) -> Result<PcaResult> {
    // steps 01-04: means, centred components, standard deviations, standardization
    let standardized = standardize(data).map_err(|e| match e {
        Error::Degenerate { .. } => e.at_step(3, "standard deviations"),
        e => e.at_step(4, "standardization"),
    })?;
    let corr = correlation_matrix(&standardized).map_err(|e| e.at_step(5, "correlation matrix"))?;
    let eig = eigen_correlation(&corr).map_err(|e| e.at_step(6, "eigenproblem"))?;
    // steps 07-08: S = sqrt(Λ), L = U·S
    let full = full_loadings(&eig, corr.labels()).map_err(|e| e.at_step(8, "factor loadings"))?;
    let report = minvar_count(&eig, epsilon).map_err(|e| e.at_step(9, "number of components"))?;
    let k = report.chosen;
    let loadings = truncate(&full, k).map_err(|e| e.at_step(11, "reduce eigenvectors"))?;
    let scores = project(&standardized, &eig.eigenvectors, k)
        .map_err(|e| e.at_step(12, "principal components"))?;
    Ok(PcaResult {
        standardized,
        scores,
        retained: k,
        eig,
        loadings,
        report,
    })
}

/// Squared correlations between variables and component scores.
#[derive(Debug, Clone, PartialEq)]
pub struct Determination {
    /// `n×k`; entry `(i, j)` is `corr(variable i, score j)²`.
    pub values: DMatrix<f64>,
    /// Score columns with zero variance; their entries are set to 0.
    pub degenerate: Vec<usize>,
}

pub fn pc_variable_determination(
    standardized: &DataMatrix,
    scores: &DMatrix<f64>,
) -> Result<Determination> {
    let m = standardized.rows();
    if scores.nrows() != m {
        return Err(Error::Shape(format!(
            "{} score rows for {m} observations",
            scores.nrows()
        )));
    }
    let n = standardized.cols();
    let k = scores.ncols();
    let mut values = DMatrix::zeros(n, k);
    let mut degenerate = Vec::new();
    for j in 0..k {
        let col: Vec<f64> = scores.column(j).iter().copied().collect();
        let mean = col.iter().sum::<f64>() / m as f64;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m as f64;
        if var < ZERO_VARIANCE {
            degenerate.push(j);
            continue;
        }
        for i in 0..n {
            let r = correlation(standardized.column(i), &col)?;
            values[(i, j)] = r * r;
        }
    }
    Ok(Determination { values, degenerate })
}

/// `L·Uᵀ` with its largest asymmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct ArtifactCheck {
    pub product: DMatrix<f64>,
    pub asymmetry: f64,
}

/// Forms `M = L·Uᵀ = U·Λ^½·Uᵀ`, which must be symmetric.
pub fn verify_artifact(loadings: &LoadingMatrix, u: &DMatrix<f64>) -> Result<ArtifactCheck> {
    let n = loadings.rows();
    if loadings.factors() != n || u.shape() != (n, n) {
        return Err(Error::Size(format!(
            "need full {n}x{n} loadings and eigenvectors, got {}x{} and {:?}",
            n,
            loadings.factors(),
            u.shape()
        )));
    }
    let product = loadings.entries() * u.transpose();
    let asymmetry = (&product - product.transpose()).amax();
    if asymmetry >= ARTIFACT_TOL {
        return Err(Error::Inconsistent(format!(
            "L·Uᵀ is not symmetric (max {asymmetry:e})"
        )));
    }
    Ok(ArtifactCheck { product, asymmetry })
}
