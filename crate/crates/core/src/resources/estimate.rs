//! End-to-end query-complexity estimates evaluated with unit constants.

use serde::{Deserialize, Serialize};

use super::ResourceError;
use crate::linalg::SpectralSummary;

/// How row states are prepared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostRegime {
    /// Rows with efficient loaders: `O(log m)` gates, `O(1)` ancillas.
    Structured,
    /// Arbitrary `s`-sparse rows: `O(log s)` depth, `O(s)` ancillas.
    SparseGeneral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormulaInputs {
    pub rank: usize,
    pub x_t_norm: f64,
    pub eps: f64,
    pub m: usize,
    pub s: usize,
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityEstimate {
    pub regime: CostRegime,
    /// `2^r · (1/‖x_T‖) · (1/ε) · log₂(m or s)`, with the amplification
    /// repetition cost `1/‖x_T‖` as the norm factor.
    pub value: f64,
    /// The same expression with `‖x_T‖` as a multiplier instead.
    pub value_as_stated: f64,
    /// `1/‖x_T‖`
    pub repetition_factor: f64,
    /// `value` with `1/‖x_T‖` replaced by `κ`; `None` for singular inputs.
    pub worst_case_kappa: Option<f64>,
    /// Ancilla units: `O(1)` structured, `O(s)` sparse.
    pub ancillas: f64,
    pub inputs: FormulaInputs,
}

fn positive(what: &'static str, v: f64) -> Result<(), ResourceError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ResourceError::InvalidInput { what, value: v })
    }
}

/// Evaluates the complexity expression for a run that produced `x_T`.
pub fn complexity_estimate(
    spectral: &SpectralSummary,
    x_t_norm: f64,
    eps: f64,
    m: usize,
    s: usize,
    regime: CostRegime,
) -> Result<ComplexityEstimate, ResourceError> {
    positive("x_T norm", x_t_norm)?;
    if x_t_norm > 1.0 + 1e-12 {
        return Err(ResourceError::InvalidInput { what: "x_T norm", value: x_t_norm });
    }
    positive("eps", eps)?;
    positive("m", m as f64)?;
    positive("s", s as f64)?;
    if spectral.rank == 0 {
        return Err(ResourceError::InvalidInput { what: "rank", value: 0.0 });
    }
    let size = match regime {
        CostRegime::Structured => m,
        CostRegime::SparseGeneral => s,
    };
    let base = 2f64.powi(spectral.rank.min(i32::MAX as usize) as i32) * (size as f64).log2() / eps;
    let repetition_factor = 1.0 / x_t_norm;
    let ancillas = match regime {
        CostRegime::Structured => 1.0,
        CostRegime::SparseGeneral => s as f64,
    };
    Ok(ComplexityEstimate {
        regime,
        value: base * repetition_factor,
        value_as_stated: base * x_t_norm,
        repetition_factor,
        worst_case_kappa: spectral.kappa.map(|k| base * k),
        ancillas,
        inputs: FormulaInputs { rank: spectral.rank, x_t_norm, eps, m, s, kappa: spectral.kappa },
    })
}
