//! Row state preparation: a real orthogonal `U_j` with `U_j|0⟩ = |a_j⟩`,
//! and the gate-cost model charged for it.

use serde::{Deserialize, Serialize};

use super::{BlockEncoding, BlockEncodingError};
use crate::linalg::{ComplexMatrix, RealMatrix, RealVector};
use crate::resources::CostRegime;

/// Accepted deviation of `‖v‖` from one.
pub const UNIT_NORM_TOL: f64 = 1e-10;

/// Multiplicative constants of the two preparation regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostConstants {
    pub c1: u64,
    pub c2: u64,
    pub c3: u64,
    pub c4: u64,
}

impl Default for CostConstants {
    fn default() -> Self {
        Self { c1: 1, c2: 1, c3: 1, c4: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatePrepCost {
    pub regime: CostRegime,
    pub gates: u64,
    pub depth: u64,
    pub ancillas: u64,
}

/// `⌈log₂ n⌉`, with `⌈log₂ 1⌉ = 0`.
pub fn ceil_log2(n: usize) -> u64 {
    if n <= 1 {
        0
    } else {
        u64::from(usize::BITS - (n - 1).leading_zeros())
    }
}

impl StatePrepCost {
    /// Cost of preparing a vector of length `m` with `support` nonzeros.
    pub fn model(regime: CostRegime, m: usize, support: usize, k: &CostConstants) -> Self {
        match regime {
            CostRegime::Structured => {
                let gates = k.c1 * ceil_log2(m);
                Self { regime, gates, depth: gates, ancillas: k.c2 }
            }
            CostRegime::SparseGeneral => {
                let depth = k.c3 * ceil_log2(support);
                Self { regime, gates: depth, depth, ancillas: k.c4 * support as u64 }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct StatePrepUnitary {
    encoding: BlockEncoding,
    target: RealVector,
    cost: StatePrepCost,
}

impl StatePrepUnitary {
    /// Zero-ancilla, `α = 1` view of the preparation unitary.
    pub fn encoding(&self) -> &BlockEncoding {
        &self.encoding
    }

    pub fn target(&self) -> &RealVector {
        &self.target
    }

    pub fn cost(&self) -> &StatePrepCost {
        &self.cost
    }

    pub fn into_encoding(self) -> BlockEncoding {
        self.encoding
    }
}

/// Householder reflection `I − 2wwᵀ/‖w‖²` with `w = e₀ − v`, whose first
/// column is `v`. Identity when `v = e₀`.
pub fn householder_completion(v: &RealVector) -> RealMatrix {
    let n = v.dim();
    let mut w: Vec<f64> = v.iter().map(|x| -x).collect();
    w[0] += 1.0;
    let wsq: f64 = w.iter().map(|x| x * x).sum();
    let mut h = RealMatrix::identity(n);
    if wsq < 1e-30 {
        return h;
    }
    let f = 2.0 / wsq;
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] -= f * w[i] * w[j];
        }
    }
    h
}

/// Builds `U` with `U|0⟩ = |v⟩` for a real unit vector `v`.
pub fn state_prep(v: &RealVector, regime: CostRegime, constants: &CostConstants) -> Result<StatePrepUnitary, BlockEncodingError> {
    let norm = v.norm();
    if norm == 0.0 {
        return Err(BlockEncodingError::ZeroVector);
    }
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(BlockEncodingError::NotUnitNorm { norm });
    }
    let support = v.iter().filter(|x| **x != 0.0).count();
    let u = ComplexMatrix::from_real(&householder_completion(v))?;
    let encoding = BlockEncoding::from_parts(u, 0, v.dim(), 1.0, "prep".into());
    Ok(StatePrepUnitary {
        encoding,
        target: v.clone(),
        cost: StatePrepCost::model(regime, v.dim(), support, constants),
    })
}
