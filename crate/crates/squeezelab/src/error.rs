//! Error and result types shared across the crate.

use thiserror::Error;

/// Errors produced by state construction, linear algebra, grid rendering and
/// the command-line layer.
#[derive(Debug, Error)]
pub enum Error {
    /// Basis dimension below 2, or mismatched between operands.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// A numerical routine failed to converge or produced non-finite values.
    #[error("numerical error: {0}")]
    NumericalError(String),

    /// The requested state does not fit the truncated basis within the tail
    /// bound.
    #[error("truncation guard violated: {0}")]
    TruncationError(String),

    /// An operation that requires a Hermitian operator received a
    /// non-Hermitian one.
    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),

    /// A parameter outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Grid too coarse or too short to resolve the requested basis functions.
    #[error("grid resolution: {0}")]
    GridResolutionError(String),

    /// File output failure in the command-line layer.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
