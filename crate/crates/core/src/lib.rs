//! Classical Kaczmarz iteration and a simulator of its block-encoded
//! counterpart.
//!
//! - [`linalg`]: dense matrices, Jacobi SVD, spectral summaries.
//! - [`classical`]: row selection, the relaxed projection step, rate bounds.
//! - [`blockenc`]: block encodings and their combinators.
//! - [`qkaczmarz`]: the five-step iteration in two backends, plus measurement.
//! - [`resources`]: cost recursion and complexity estimates.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blockenc;
pub mod classical;
pub mod linalg;
pub mod qkaczmarz;
pub mod resources;
pub mod rng;

pub use blockenc::{AmplifyParams, BlockAlgebra, BlockEncoding, BlockEncodingError, EncodedOperator};
pub use classical::{IterateTrace, KaczmarzError, LinearSystem, SelectionKind, SelectionStrategy, StoppingRule};
pub use linalg::{ComplexMatrix, LinalgError, RealMatrix, RealVector, SpectralSummary};
pub use qkaczmarz::{Backend, MeasurementOutcome, QuantumConfig, QuantumError, QuantumIterationState, QuantumRun};
pub use resources::{ComplexityEstimate, CostRegime, ResourceError, ResourceLedger};

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Kaczmarz(#[from] KaczmarzError),
    #[error(transparent)]
    BlockEncoding(#[from] BlockEncodingError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
}
