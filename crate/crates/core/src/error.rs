use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("degenerate column `{column}`: {reason}")]
    Degenerate { column: String, reason: String },

    #[error("index error: {0}")]
    Index(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not positive semi-definite: eigenvalue {eigenvalue:e}")]
    NotPsd { eigenvalue: f64 },

    #[error("no convergence after {sweeps} sweeps (off-diagonal {residual:e})")]
    Convergence { sweeps: usize, residual: f64 },

    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error("threshold {0} outside (0.5, 1]")]
    Threshold(f64),

    #[error("order error: {0}")]
    Order(String),

    /// A pipeline stage failed; `step` is the stage number of the modified PCA procedure.
    #[error("step {step:02} ({stage}): {source}")]
    Stage {
        step: u8,
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_step(self, step: u8, stage: &'static str) -> Self {
        Error::Stage {
            step,
            stage,
            source: Box::new(self),
        }
    }
}
