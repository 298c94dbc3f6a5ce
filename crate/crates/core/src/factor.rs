//! Factor loadings, communalities and the common-plus-unique factor model.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::eigen::EigenDecomposition;
use crate::error::{Error, Result};
use crate::stats::DataMatrix;
use crate::sum::compensated_sum;

/// Communalities up to this far above 1 are rounding and get clamped.
const OVERSHOOT_CLAMP: f64 = 1e-10;
const OVERSHOOT_LIMIT: f64 = 1e-6;

/// Loadings of `n` variables (rows) on `k` factors (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct LoadingMatrix {
    entries: DMatrix<f64>,
    labels: Vec<String>,
}

impl LoadingMatrix {
    pub fn new(entries: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        let (n, k) = entries.shape();
        if n == 0 || k == 0 {
            return Err(Error::Size(format!(
                "loading matrix must be non-empty, got {n}x{k}"
            )));
        }
        if labels.len() != n {
            return Err(Error::Size(format!(
                "{} labels for {n} variables",
                labels.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("loadings must be finite".into()));
        }
        Ok(LoadingMatrix { entries, labels })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of variables.
    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    /// Number of retained factors.
    pub fn factors(&self) -> usize {
        self.entries.ncols()
    }

    /// Sum of squared loadings in each column (variance carried by each factor).
    pub fn column_sums_of_squares(&self) -> Vec<f64> {
        self.entries
            .column_iter()
            .map(|c| compensated_sum(c.iter().map(|v| v * v)))
            .collect()
    }
}

/// Per-variable share of variance explained by the retained factors.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunalityVector {
    pub values: Vec<f64>,
}

/// Loadings plus the weight of each variable's unique factor.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorModel {
    pub loadings: LoadingMatrix,
    /// `w_i = sqrt(1 - v_i)`.
    pub unique_weights: Vec<f64>,
}

impl FactorModel {
    pub fn labels(&self) -> &[String] {
        self.loadings.labels()
    }
}

/// `L = U · diag(sqrt(λ))` over all factors.
pub fn full_loadings(eig: &EigenDecomposition, labels: &[String]) -> Result<LoadingMatrix> {
    if let Some(&bad) = eig.eigenvalues.iter().find(|l| **l < 0.0) {
        return Err(Error::NotPsd { eigenvalue: bad });
    }
    let mut entries = eig.eigenvectors.clone();
    for (mut col, l) in entries.column_iter_mut().zip(&eig.eigenvalues) {
        col *= l.sqrt();
    }
    LoadingMatrix::new(entries, labels.to_vec())
}

/// Keeps the first `k` factors.
pub fn truncate(loadings: &LoadingMatrix, k: usize) -> Result<LoadingMatrix> {
    if k == 0 || k > loadings.factors() {
        return Err(Error::Size(format!(
            "cannot keep {k} of {} factors",
            loadings.factors()
        )));
    }
    LoadingMatrix::new(
        loadings.entries.columns(0, k).into_owned(),
        loadings.labels.clone(),
    )
}

pub fn communalities(loadings: &LoadingMatrix) -> CommunalityVector {
    let values = loadings
        .entries
        .row_iter()
        .map(|r| compensated_sum(r.iter().map(|v| v * v)))
        .collect();
    CommunalityVector { values }
}

/// Entry `(i, j)` is the communality of variable `i` with the first `j + 1` factors.
pub fn cumulative_communalities(loadings: &LoadingMatrix) -> Result<DMatrix<f64>> {
    let n = loadings.rows();
    if loadings.factors() != n {
        return Err(Error::Size(format!(
            "cumulative communalities need all {n} factors, got {}",
            loadings.factors()
        )));
    }
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut acc = crate::sum::CompensatedSum::default();
        for j in 0..n {
            let l = loadings.entries[(i, j)];
            acc.add(l * l);
            out[(i, j)] = acc.value();
        }
    }
    Ok(out)
}

pub fn build_model(loadings: &LoadingMatrix) -> Result<FactorModel> {
    let comm = communalities(loadings);
    let mut unique_weights = Vec::with_capacity(comm.values.len());
    for (v, label) in comm.values.iter().zip(loadings.labels()) {
        if *v > 1.0 + OVERSHOOT_LIMIT {
            return Err(Error::Inconsistent(format!(
                "communality of `{label}` is {v}, above 1"
            )));
        }
        let v = if *v > 1.0 && *v <= 1.0 + OVERSHOOT_CLAMP {
            1.0
        } else {
            v.min(1.0)
        };
        unique_weights.push((1.0 - v).sqrt());
    }
    Ok(FactorModel {
        loadings: loadings.clone(),
        unique_weights,
    })
}

/// Draws `draws` observations of the model's variables.
///
/// Each row is `L·f + w∘e` where `f` (one per factor) and `e` (one per
/// variable) are independent standard normals from a ChaCha8 stream seeded
/// with `seed`.
pub fn simulate(model: &FactorModel, draws: usize, seed: u64) -> Result<DataMatrix> {
    if draws < 2 {
        return Err(Error::Size(format!("need at least 2 draws, got {draws}")));
    }
    let l = model.loadings.entries();
    let (n, k) = l.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = DMatrix::zeros(draws, n);
    let mut factors = vec![0.0; k];
    for row in 0..draws {
        for f in factors.iter_mut() {
            *f = rng.sample(StandardNormal);
        }
        for i in 0..n {
            let unique: f64 = rng.sample(StandardNormal);
            let common: f64 = (0..k).map(|j| l[(i, j)] * factors[j]).sum();
            values[(row, i)] = common + model.unique_weights[i] * unique;
        }
    }
    DataMatrix::new(values, model.labels().to_vec())
}
