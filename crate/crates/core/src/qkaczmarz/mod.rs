//! Block-encoded Kaczmarz iteration: each step builds `U_x⁽ᵏ⁺¹⁾` from
//! `U_x⁽ᵏ⁾` and the row preparation `U_j`, so that the first column of the
//! encoded operator is the classical iterate.

mod measure;
mod pipeline;
mod steps;

pub use measure::{measure, MeasurementOutcome};
pub use pipeline::{
    extract_first_column, register_dim, run_quantum_kaczmarz, AlphaPolicy, Backend, IterateEncoding, QuantumConfig,
    QuantumIterationState, QuantumRun, FULL_UNITARY_MAX_COLS, FULL_UNITARY_MAX_STEPS,
};
pub use steps::{step1_inner_product, step2_rx, step3_residual_column, step4_combine, step5_deflate};

use crate::blockenc::BlockEncodingError;
use crate::classical::KaczmarzError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantumError {
    #[error("b not normalized: entry {value} exceeds 1 in magnitude")]
    RhsNotNormalized { value: f64 },
    #[error("selected row has zero norm")]
    ZeroRowNorm,
    #[error("relaxation must lie in (0, 4] at the residual step, got {0}")]
    InvalidLambda(f64),
    #[error("register dimension {dim} cannot host the rotation")]
    Register { dim: usize },
    #[error("initial iterate has norm {norm} > 1")]
    InitialNorm { norm: f64 },
    #[error("full-unitary backend limited to {} columns and {} iterations (got {cols}, {steps}); use the encoded-operator backend", FULL_UNITARY_MAX_COLS, FULL_UNITARY_MAX_STEPS)]
    DimensionGuard { cols: usize, steps: usize },
    #[error("padding or imaginary part of magnitude {magnitude:e} in iterate {k}")]
    PaddingLeak { k: usize, magnitude: f64 },
    #[error("subnormalization {alpha} cannot be raised further (singular value {singular_value}, limit {limit})")]
    AlphaLimit { alpha: f64, singular_value: f64, limit: f64 },
    #[error("post-selection probability zero")]
    PostSelectionZero,
    #[error("success probability {0} exceeds 1")]
    ProbabilityAboveOne(f64),
    #[error("iteration {k}: {source}")]
    AtIteration { k: usize, source: Box<QuantumError> },
    #[error(transparent)]
    BlockEncoding(#[from] BlockEncodingError),
    #[error(transparent)]
    Kaczmarz(#[from] KaczmarzError),
}
