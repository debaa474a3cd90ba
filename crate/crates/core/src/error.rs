use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical kernels and the experiment building blocks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("eigenvalue iteration did not converge after {iterations} iterations (matrix hash {hash:016x})")]
    NoConvergence { iterations: usize, hash: u64 },

    #[error("shift {z} is too close to the spectrum (smallest singular value ~ {s_min:e})")]
    NearSingularShift { z: Complex64, s_min: f64 },

    #[error("singular rank-one update: |1 + v*A^-1 u| = {0:e}")]
    SingularUpdate(f64),

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("moment of order {0} is not supported (maximum total order is 8)")]
    UnsupportedMoment(usize),

    #[error("degenerate truncation: variance of the truncated atom is {0:e}")]
    DegenerateTruncation(f64),

    #[error("eigenvalue {eigenvalue} of the deterministic part lies in the forbidden band ({lower}, {upper})")]
    BandViolation {
        eigenvalue: Complex64,
        lower: f64,
        upper: f64,
    },

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
