use serde::{Deserialize, Serialize};

use super::{svd, LinalgError, RealMatrix, RealVector};

/// Relative threshold below which singular values count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Extreme singular values, numerical rank and Frobenius mass of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    /// Smallest singular value above the rank threshold (0 for the zero matrix).
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub rank: usize,
    /// `‖A‖_F² = Σ σᵢ²`
    pub frob_sq: f64,
    /// `σ_max / σ_min`; `None` when undefined (zero matrix).
    pub kappa: Option<f64>,
    pub singular_values: Vec<f64>,
}

impl SpectralSummary {
    /// `σ_min² / ‖A‖_F²`, the per-step contraction of randomized Kaczmarz.
    pub fn contraction_ratio(&self) -> f64 {
        if self.frob_sq > 0.0 {
            (self.sigma_min * self.sigma_min / self.frob_sq).min(1.0)
        } else {
            0.0
        }
    }
}

/// Summarizes `m`; `rank_tol` is relative to `σ_max` and defaults to
/// [`DEFAULT_RANK_TOL`].
pub fn spectral_summary(m: &RealMatrix, rank_tol: Option<f64>) -> Result<SpectralSummary, LinalgError> {
    let rel = rank_tol.unwrap_or(DEFAULT_RANK_TOL);
    if !(rel > 0.0) {
        return Err(LinalgError::InvalidTolerance(rel));
    }
    let s = svd::singular_values(m)?;
    Ok(summary_from_values(s, rel))
}

pub(crate) fn summary_from_values(s: Vec<f64>, rel: f64) -> SpectralSummary {
    let sigma_max = s.first().copied().unwrap_or(0.0);
    let cutoff = rel * sigma_max;
    let rank = s.iter().filter(|&&v| v > cutoff).count();
    let sigma_min = if rank == 0 { 0.0 } else { s[rank - 1] };
    let frob_sq = s.iter().map(|v| v * v).sum();
    let kappa = (sigma_min > 0.0).then(|| sigma_max / sigma_min);
    SpectralSummary { sigma_min, sigma_max, rank, frob_sq, kappa, singular_values: s }
}

/// Minimum-norm least-squares solution `A⁺b` via the SVD, dropping singular
/// values below the default rank threshold.
pub fn least_squares_oracle(a: &RealMatrix, b: &RealVector) -> Result<RealVector, LinalgError> {
    if b.dim() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "least_squares_oracle",
            expected: a.rows(),
            found: b.dim(),
        });
    }
    let dec = svd::svd(a)?;
    let smax = dec.s.as_slice().first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Err(LinalgError::ZeroMatrix);
    }
    let cutoff = DEFAULT_RANK_TOL * smax;
    let mut x = vec![0.0; a.cols()];
    for l in 0..dec.s.dim() {
        let sigma = dec.s[l];
        if sigma <= cutoff {
            continue;
        }
        let coeff = (0..a.rows()).map(|i| dec.u[(i, l)] * b[i]).sum::<f64>() / sigma;
        for (j, xj) in x.iter_mut().enumerate() {
            *xj += coeff * dec.v[(j, l)];
        }
    }
    Ok(RealVector::from(x))
}
