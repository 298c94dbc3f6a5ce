//! Principal component analysis and exploratory factor analysis on the
//! correlation matrix.
//!
//! The crate covers the shared core of both analyses (standardization,
//! Pearson correlation, a cyclic Jacobi eigensolver, factor loadings,
//! communalities and Kaiser's Varimax rotation) together with factor
//! retention rules. Besides the classic Kaiser, explained-variance and
//! half-count rules it implements the minimum per-variable variance rule:
//! keep adding factors until every variable has at least a fraction `ε` of
//! its variance reproduced ([`retention::minvar_count`]). The same rule drives
//! the modified PCA pipeline in [`pca::pca_modified`].
//!
//! ```
//! use facpca_core::{eigen, factor, retention, stats::CorrelationMatrix};
//! use nalgebra::DMatrix;
//!
//! let r = DMatrix::from_row_slice(2, 2, &[1.0, 0.6, 0.6, 1.0]);
//! let corr = CorrelationMatrix::new(r, vec!["a".into(), "b".into()]).unwrap();
//! let eig = eigen::eigen_correlation(&corr).unwrap();
//! assert!((eig.eigenvalues[0] - 1.6).abs() < 1e-12);
//!
//! let report = retention::minvar_count(&eig, 0.51).unwrap();
//! assert_eq!(report.chosen, 1);
//!
//! let loadings = factor::full_loadings(&eig, corr.labels()).unwrap();
//! assert!((loadings.entries()[(0, 0)].abs() - 0.8f64.sqrt()).abs() < 1e-12);
//! ```

pub mod compare;
pub mod eigen;
pub mod error;
pub mod factor;
pub mod pca;
pub mod retention;
pub mod stats;
pub mod varimax;

mod sum;

pub use error::{Error, Result};
