use std::path::PathBuf;

use clap::ValueEnum;
use facpca_core::retention::DEFAULT_EPSILON;

use crate::error::{CliError, Result};

/// Where reports go when neither `--out` nor `FACPCA_OUT` is given.
pub const DEFAULT_REPORT_DIR: &str = "facpca-report";
pub const DEFAULT_PERCENT: f64 = 80.0;
pub const DEFAULT_DRAWS: usize = 1000;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// Header of variable names followed by numeric observations.
    RawCsv,
    /// Labelled square correlation matrix.
    CorrelationCsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rotate {
    Varimax,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub input_kind: InputKind,
    pub epsilon: f64,
    pub factor_count_override: Option<usize>,
    pub rotate: Rotate,
    pub kaiser_normalize: bool,
    /// `None` prints to stdout (file-producing commands fall back to [`DEFAULT_REPORT_DIR`]).
    pub output_dir: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub seed: Option<u64>,
    pub percent_threshold: f64,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>, input_kind: InputKind) -> Self {
        RunConfig {
            input_path: input_path.into(),
            input_kind,
            epsilon: DEFAULT_EPSILON,
            factor_count_override: None,
            rotate: Rotate::Varimax,
            kaiser_normalize: true,
            output_dir: None,
            output_format: OutputFormat::Csv,
            seed: None,
            percent_threshold: DEFAULT_PERCENT,
        }
    }

    /// Checks the ranges that do not depend on the data.
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.5 && self.epsilon <= 1.0) {
            return Err(CliError::Config(format!(
                "--epsilon must be in (0.5, 1], got {}",
                self.epsilon
            )));
        }
        if !(self.percent_threshold > 0.0 && self.percent_threshold <= 100.0) {
            return Err(CliError::Config(format!(
                "--percent must be in (0, 100], got {}",
                self.percent_threshold
            )));
        }
        if self.factor_count_override == Some(0) {
            return Err(CliError::Config("--factors must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn check_factor_count(&self, n: usize) -> Result<()> {
        match self.factor_count_override {
            Some(k) if k > n => Err(CliError::Config(format!(
                "--factors {k} exceeds the {n} variables"
            ))),
            _ => Ok(()),
        }
    }
}
