//! Block encodings, their combinators, and row state preparation.

mod algebra;
mod encoding;
mod state_prep;

pub use algebra::{first_column, rx, BlockAlgebra, EncodedOperator};
pub use encoding::{
    be_adjoint, be_amplify, be_linear_combination, be_pad_ancillas, be_postselect_leading, be_product, be_recompile,
    be_scale_down, be_subnormalize, be_tensor, dilate, encoded_of, rx_encoding, AmplifyParams, BlockEncoding,
    CONTRACTION_SLACK, UNITARITY_TOL,
};
pub use state_prep::{
    ceil_log2, householder_completion, state_prep, CostConstants, StatePrepCost, StatePrepUnitary, UNIT_NORM_TOL,
};

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BlockEncodingError {
    #[error("operator norm {norm} exceeds 1; subnormalize first")]
    NotContraction { norm: f64 },
    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("ancilla count mismatch: {left} vs {right}")]
    AncillaMismatch { left: usize, right: usize },
    #[error("subnormalization mismatch: {left} vs {right}")]
    AlphaMismatch { left: f64, right: f64 },
    #[error("subnormalization must be finite and at least the current value, got {0}")]
    InvalidSubnormalization(f64),
    #[error("scale factor must exceed 1, got {0}")]
    InvalidScale(f64),
    #[error("amplification factor must exceed 1, got {0}")]
    InvalidGamma(f64),
    #[error("amplification parameters out of range (delta {delta}, eps {eps})")]
    InvalidAmplifyParams { delta: f64, eps: f64 },
    #[error("singular value {singular_value} lies outside the amplification window (limit {limit})")]
    AmplificationWindow { singular_value: f64, limit: f64 },
    #[error("LCU sign must be +1 or -1, got {0}")]
    InvalidSign(f64),
    #[error("cannot prepare the zero vector")]
    ZeroVector,
    #[error("state vector has norm {norm}, expected 1")]
    NotUnitNorm { norm: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
