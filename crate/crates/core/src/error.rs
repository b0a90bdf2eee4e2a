use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("expansion index n = {0} is out of range (need n >= {1})")]
    IndexOutOfRange(usize, usize),

    #[error("beta = {beta} is out of range: {reason}")]
    BetaOutOfRange { beta: f64, reason: &'static str },

    #[error("leading coefficient must be nonzero")]
    ZeroLeading,

    #[error("operation needs a polynomial of degree >= {needed}, got degree {got}")]
    DegreeTooLow { needed: usize, got: usize },

    #[error("root finder did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NoConvergence {
        iterations: usize,
        worst_residual: f64,
        best: Vec<Complex64>,
    },

    #[error("root {root} lies within {radius} of beta but is not beta")]
    RootNearBeta { root: Complex64, radius: f64 },

    #[error("contraction factor {0} is not below 1")]
    ContractionTooLarge(f64),

    #[error("contraction left a root at modulus {0}")]
    ContractionFailed(f64),

    #[error("designated root index {index} is invalid for {len} roots")]
    BadDesignatedRoot { index: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("fit grid is degenerate: {0}")]
    DegenerateGrid(String),
}
