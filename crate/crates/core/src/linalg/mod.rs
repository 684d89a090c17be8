//! Dense real/complex kernels and spectral quantities.

mod complex;
mod matrix;
mod spectral;
pub mod svd;

pub use complex::ComplexMatrix;
pub use matrix::{RealMatrix, RealVector};
pub use spectral::{least_squares_oracle, spectral_summary, SpectralSummary, DEFAULT_RANK_TOL};
pub use svd::{orthonormalize, svd, Svd};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("{op}: dimension mismatch (expected {expected}, found {found})")]
    DimensionMismatch { op: &'static str, expected: usize, found: usize },
    #[error("non-finite entry in {what} at flat index {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("Jacobi SVD of a {rows}x{cols} matrix did not converge in {sweeps} sweeps")]
    NoConvergence { rows: usize, cols: usize, sweeps: usize },
    #[error("rank tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("operation undefined for the zero matrix")]
    ZeroMatrix,
    #[error("columns are linearly dependent at column {column}")]
    RankDeficientBasis { column: usize },
}
