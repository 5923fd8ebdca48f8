use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("malformed sparse matrix: {0}")]
    MalformedMatrix(String),

    #[error("matrix is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is singular at pivot {0}")]
    Singular(usize),

    #[error("non-positive diagonal entry {value:e} in row {row}")]
    NonPositiveDiagonal { row: usize, value: f64 },

    #[error("grid level mismatch: fine m = {fine}, coarse m = {coarse}")]
    LevelMismatch { fine: u32, coarse: u32 },

    #[error("polynomial violates |p(λ)| < 1 on the interval: |p({lambda})| = {value}")]
    InvalidPolynomial { lambda: f64, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("terminal beta coefficient does not vanish: |beta_(k+1)| = {0:e}")]
    BetaResidual(f64),

    #[error("bracketing failed: {0}")]
    Bracket(String),

    #[error("coarse space is the whole space; the approximation constant is undefined")]
    DegenerateCoarseSpace,

    #[error("matrix market parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
