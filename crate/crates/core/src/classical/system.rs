use serde::{Deserialize, Serialize};

use super::KaczmarzError;
use crate::linalg::{least_squares_oracle, spectral_summary, RealMatrix, RealVector, SpectralSummary};

/// Slack allowed on the `‖A‖ ≤ 1`, `‖b‖₂ ≤ 1` input assumptions.
pub const NORM_SLACK: f64 = 1e-12;

/// The system `Ax = b` with cached row norms and spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSystem {
    a: RealMatrix,
    b: RealVector,
    row_norms: RealVector,
    spectral: SpectralSummary,
}

impl LinearSystem {
    pub fn new(a: RealMatrix, b: RealVector) -> Result<Self, KaczmarzError> {
        if b.dim() != a.rows() {
            return Err(KaczmarzError::DimensionMismatch { expected: a.rows(), found: b.dim() });
        }
        let row_norms = (0..a.rows())
            .map(|j| a.row(j).iter().map(|v| v * v).sum::<f64>().sqrt())
            .collect::<Vec<_>>()
            .into();
        let spectral = spectral_summary(&a, None)?;
        Ok(Self { a, b, row_norms, spectral })
    }

    pub fn a(&self) -> &RealMatrix {
        &self.a
    }

    pub fn b(&self) -> &RealVector {
        &self.b
    }

    pub fn spectral(&self) -> &SpectralSummary {
        &self.spectral
    }

    pub fn row_norms(&self) -> &RealVector {
        &self.row_norms
    }

    /// Number of equations `n`.
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    /// Number of unknowns `m`.
    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn row(&self, j: usize) -> &[f64] {
        self.a.row(j)
    }

    pub fn row_norm(&self, j: usize) -> f64 {
        self.row_norms[j]
    }

    /// `Σ_j ‖a_j‖²`, which equals `‖A‖_F²`.
    pub fn row_norm_sq_sum(&self) -> f64 {
        self.row_norms.iter().map(|v| v * v).sum()
    }

    /// Number of nonzero entries of row `j`.
    pub fn row_support(&self, j: usize) -> usize {
        self.a.row(j).iter().filter(|v| **v != 0.0).count()
    }

    /// `max_j s_j`
    pub fn max_row_support(&self) -> usize {
        (0..self.rows()).map(|j| self.row_support(j)).max().unwrap_or(0)
    }

    pub fn residual_norm(&self, x: &RealVector) -> Result<f64, KaczmarzError> {
        let ax = self.a.matvec(x)?;
        Ok(ax.dist_sq(&self.b).sqrt())
    }

    /// Minimum-norm least-squares solution `A⁺b`.
    pub fn least_squares_solution(&self) -> Result<RealVector, KaczmarzError> {
        Ok(least_squares_oracle(&self.a, &self.b)?)
    }

    /// Checks the quantum input assumptions `‖A‖ ≤ 1` and `‖b‖₂ ≤ 1`.
    pub fn check_quantum_input(&self) -> Result<(), KaczmarzError> {
        let op = self.spectral.sigma_max;
        let bn = self.b.norm();
        if op > 1.0 + NORM_SLACK || bn > 1.0 + NORM_SLACK {
            return Err(KaczmarzError::NotNormalized { operator_norm: op, rhs_norm: bn });
        }
        Ok(())
    }

    /// Rescales `A` and `b` by a common factor so that `‖A‖ ≤ 1` and
    /// `‖b‖₂ ≤ 1`. The solution set is unchanged.
    pub fn normalized(&self) -> Result<Self, KaczmarzError> {
        let scale = self.spectral.sigma_max.max(self.b.norm());
        if scale == 0.0 {
            return Ok(self.clone());
        }
        Self::new(self.a.scaled(1.0 / scale), self.b.scaled(1.0 / scale))
    }
}
