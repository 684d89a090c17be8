//! Row-action Kaczmarz iteration with cyclic and randomized row selection.

mod bounds;
mod kaczmarz;
mod selection;
mod system;

pub use bounds::{convergence_bound, iteration_count, iteration_estimate, t_lower_bound, t_upper_bound};
pub use kaczmarz::{kaczmarz_step, run_kaczmarz, IterateTrace, StoppingRule};
pub(crate) use kaczmarz::check_lambda;
pub use selection::{norm_weighted_probabilities, select_row, RowSelector, SelectionKind, SelectionStrategy};
pub use system::{LinearSystem, NORM_SLACK};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KaczmarzError {
    #[error("degenerate row {row}: projection undefined for a zero row")]
    DegenerateRow { row: usize },
    #[error("relaxation parameter must lie in (0, 2], got {0}")]
    InvalidLambda(f64),
    #[error("precision must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("row {row} out of range for a system with {rows} rows")]
    RowOutOfRange { row: usize, rows: usize },
    #[error("all rows are zero")]
    ZeroMatrix,
    #[error("no convergence guarantee: sigma_min is zero")]
    NoConvergenceGuarantee,
    #[error("upper bound undefined: r*kappa^2 = {r_kappa_sq} <= 1")]
    UpperBoundUndefined { r_kappa_sq: f64 },
    #[error("input not normalized: ||A|| = {operator_norm}, ||b|| = {rhs_norm} (both must be <= 1)")]
    NotNormalized { operator_norm: f64, rhs_norm: f64 },
    #[error("iteration {k}: {source}")]
    AtIteration { k: usize, source: Box<KaczmarzError> },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
