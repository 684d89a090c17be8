//! Final post-selected measurement of the iterate register.

use serde::{Deserialize, Serialize};

use super::{QuantumError, QuantumIterationState};
use crate::linalg::RealVector;
use crate::rng::SplitMix64;

/// Deviation of `‖x_T‖²` above one still accepted as a probability.
const PROBABILITY_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementOutcome {
    /// `‖x_T‖₂²`, the post-selection probability of the deflated encoding.
    pub success_probability: f64,
    /// `‖x_T‖₂² / α²`: the same event on the subnormalized unitary.
    pub raw_probability: f64,
    /// `x_T / ‖x_T‖₂`
    pub normalized_state: RealVector,
    pub shots: Option<u64>,
    pub empirical_success: Option<f64>,
}

/// Post-selects the all-zeros ancilla outcome on `U_x⁽ᵀ⁾|0⟩`. With `shots`,
/// also samples that many Bernoulli trials from `seed`.
pub fn measure(state: &QuantumIterationState, shots: Option<u64>, seed: u64) -> Result<MeasurementOutcome, QuantumError> {
    let x = &state.first_column;
    let p = x.norm_sq();
    if p == 0.0 {
        return Err(QuantumError::PostSelectionZero);
    }
    if p > 1.0 + PROBABILITY_SLACK {
        return Err(QuantumError::ProbabilityAboveOne(p));
    }
    let p = p.min(1.0);
    let alpha = state.encoding.alpha();
    let empirical_success = shots.map(|n| {
        let mut rng = SplitMix64::new(seed);
        let hits = (0..n).filter(|_| rng.bernoulli(p)).count();
        if n == 0 {
            0.0
        } else {
            hits as f64 / n as f64
        }
    });
    Ok(MeasurementOutcome {
        success_probability: p,
        raw_probability: p / (alpha * alpha),
        normalized_state: x.scaled(1.0 / x.norm()),
        shots,
        empirical_success,
    })
}
