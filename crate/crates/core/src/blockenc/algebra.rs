//! One combinator interface over two representations: full unitaries
//! ([`BlockEncoding`]) and bare encoded operators ([`EncodedOperator`]).
//!
//! The encoded-operator backend carries only `α · ⟨0|U|0⟩` and the logical
//! ancilla count, so it scales to sizes where the unitary would not fit in
//! memory. Both backends apply the same preconditions and produce the same
//! encoded operator up to rounding.

use num_complex::Complex64;

use super::encoding::{self as enc, check_lcu_operands, factor_qubits, AmplifyParams, BlockEncoding};
use super::BlockEncodingError;
use crate::linalg::ComplexMatrix;

pub trait BlockAlgebra: Clone + Sized {
    /// Zero-ancilla encoding of a unitary `u`, validated when the backend stores unitaries.
    fn from_unitary(u: ComplexMatrix, label: &str) -> Result<Self, BlockEncodingError>;
    /// One-ancilla encoding of a contraction `m`.
    fn dilate(m: &ComplexMatrix, label: &str) -> Result<Self, BlockEncodingError>;
    fn identity(dim: usize) -> Self;

    fn encoded(&self) -> ComplexMatrix;
    fn alpha(&self) -> f64;
    fn ancilla_qubits(&self) -> usize;
    fn system_dim(&self) -> usize;
    fn label(&self) -> &str;
    fn relabel(self, label: &str) -> Self;

    fn adjoint(&self) -> Self;
    fn product(&self, rhs: &Self) -> Result<Self, BlockEncodingError>;
    fn tensor(&self, rhs: &Self) -> Self;
    fn linear_combination(&self, rhs: &Self, signs: (f64, f64)) -> Result<Self, BlockEncodingError>;
    fn scale_down(&self, p: f64) -> Result<Self, BlockEncodingError>;
    fn amplify(&self, gamma: f64, params: &AmplifyParams) -> Result<Self, BlockEncodingError>;
    fn pad_ancillas(&self, k: usize) -> Self;
    fn postselect_leading(&self, factor_dim: usize) -> Result<Self, BlockEncodingError>;
    fn subnormalize(&self, alpha: f64) -> Result<Self, BlockEncodingError>;
    /// Bounds the stored representation between iterations. Logical
    /// resource counts are tracked by the caller, not here.
    fn compact(&self) -> Result<Self, BlockEncodingError>;

    /// `⟨0|ᵃ U |0⟩ᵃ`
    fn block(&self) -> ComplexMatrix {
        self.encoded().scaled_real(1.0 / self.alpha())
    }
}

impl BlockAlgebra for BlockEncoding {
    fn from_unitary(u: ComplexMatrix, label: &str) -> Result<Self, BlockEncodingError> {
        BlockEncoding::from_unitary(u, label)
    }
    fn dilate(m: &ComplexMatrix, label: &str) -> Result<Self, BlockEncodingError> {
        Ok(enc::dilate(m)?.with_label(label))
    }
    fn identity(dim: usize) -> Self {
        BlockEncoding::identity(dim)
    }
    fn encoded(&self) -> ComplexMatrix {
        BlockEncoding::encoded(self)
    }
    fn alpha(&self) -> f64 {
        BlockEncoding::alpha(self)
    }
    fn ancilla_qubits(&self) -> usize {
        BlockEncoding::ancilla_qubits(self)
    }
    fn system_dim(&self) -> usize {
        BlockEncoding::system_dim(self)
    }
    fn label(&self) -> &str {
        BlockEncoding::label(self)
    }
    fn relabel(self, label: &str) -> Self {
        self.with_label(label)
    }
    fn adjoint(&self) -> Self {
        enc::be_adjoint(self)
    }
    fn product(&self, rhs: &Self) -> Result<Self, BlockEncodingError> {
        enc::be_product(self, rhs)
    }
    fn tensor(&self, rhs: &Self) -> Self {
        enc::be_tensor(self, rhs)
    }
    fn linear_combination(&self, rhs: &Self, signs: (f64, f64)) -> Result<Self, BlockEncodingError> {
        enc::be_linear_combination(self, rhs, signs)
    }
    fn scale_down(&self, p: f64) -> Result<Self, BlockEncodingError> {
        enc::be_scale_down(self, p)
    }
    fn amplify(&self, gamma: f64, params: &AmplifyParams) -> Result<Self, BlockEncodingError> {
        enc::be_amplify(self, gamma, params)
    }
    fn pad_ancillas(&self, k: usize) -> Self {
        enc::be_pad_ancillas(self, k)
    }
    fn postselect_leading(&self, factor_dim: usize) -> Result<Self, BlockEncodingError> {
        enc::be_postselect_leading(self, factor_dim)
    }
    fn subnormalize(&self, alpha: f64) -> Result<Self, BlockEncodingError> {
        enc::be_subnormalize(self, alpha)
    }
    fn compact(&self) -> Result<Self, BlockEncodingError> {
        enc::be_recompile(self)
    }
    fn block(&self) -> ComplexMatrix {
        BlockEncoding::block(self)
    }
}

#[derive(Debug, Clone)]
pub struct EncodedOperator {
    matrix: ComplexMatrix,
    alpha: f64,
    ancilla_qubits: usize,
    label: String,
}

impl EncodedOperator {
    pub fn new(matrix: ComplexMatrix, alpha: f64, ancilla_qubits: usize, label: impl Into<String>) -> Result<Self, BlockEncodingError> {
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(BlockEncodingError::InvalidSubnormalization(alpha));
        }
        let norm = matrix.operator_norm()?;
        if norm > alpha * (1.0 + enc::CONTRACTION_SLACK) {
            return Err(BlockEncodingError::NotContraction { norm: norm / alpha });
        }
        Ok(Self { matrix, alpha, ancilla_qubits, label: label.into() })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl From<&BlockEncoding> for EncodedOperator {
    fn from(e: &BlockEncoding) -> Self {
        Self {
            matrix: e.encoded(),
            alpha: e.alpha(),
            ancilla_qubits: e.ancilla_qubits(),
            label: e.label().to_string(),
        }
    }
}

impl BlockAlgebra for EncodedOperator {
    fn from_unitary(u: ComplexMatrix, label: &str) -> Result<Self, BlockEncodingError> {
        Ok(Self { matrix: u, alpha: 1.0, ancilla_qubits: 0, label: label.into() })
    }
    fn dilate(m: &ComplexMatrix, label: &str) -> Result<Self, BlockEncodingError> {
        let norm = m.operator_norm()?;
        if norm > 1.0 + enc::CONTRACTION_SLACK {
            return Err(BlockEncodingError::NotContraction { norm });
        }
        Ok(Self { matrix: m.clone(), alpha: 1.0, ancilla_qubits: 1, label: label.into() })
    }
    fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim), alpha: 1.0, ancilla_qubits: 0, label: format!("I{dim}") }
    }
    fn encoded(&self) -> ComplexMatrix {
        self.matrix.clone()
    }
    fn alpha(&self) -> f64 {
        self.alpha
    }
    fn ancilla_qubits(&self) -> usize {
        self.ancilla_qubits
    }
    fn system_dim(&self) -> usize {
        self.matrix.dim()
    }
    fn label(&self) -> &str {
        &self.label
    }
    fn relabel(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }
    fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), label: format!("{}^†", self.label), ..self.clone() }
    }
    fn product(&self, rhs: &Self) -> Result<Self, BlockEncodingError> {
        if self.system_dim() != rhs.system_dim() {
            return Err(BlockEncodingError::DimensionMismatch { left: self.system_dim(), right: rhs.system_dim() });
        }
        Ok(Self {
            matrix: self.matrix.matmul(&rhs.matrix)?,
            alpha: self.alpha * rhs.alpha,
            ancilla_qubits: self.ancilla_qubits + rhs.ancilla_qubits,
            label: format!("({}·{})", self.label, rhs.label),
        })
    }
    fn tensor(&self, rhs: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&rhs.matrix),
            alpha: self.alpha * rhs.alpha,
            ancilla_qubits: self.ancilla_qubits + rhs.ancilla_qubits,
            label: format!("({}⊗{})", self.label, rhs.label),
        }
    }
    fn linear_combination(&self, rhs: &Self, signs: (f64, f64)) -> Result<Self, BlockEncodingError> {
        check_lcu_operands(
            (self.ancilla_qubits, self.system_dim(), self.alpha),
            (rhs.ancilla_qubits, rhs.system_dim(), rhs.alpha),
            signs,
        )?;
        let op = |s: f64| if s > 0.0 { "+" } else { "-" };
        Ok(Self {
            matrix: self.matrix.combine(0.5 * signs.0, &rhs.matrix, 0.5 * signs.1)?,
            alpha: self.alpha,
            ancilla_qubits: self.ancilla_qubits + 1,
            label: format!("[{}{} {}{}]/2", op(signs.0), self.label, op(signs.1), rhs.label),
        })
    }
    fn scale_down(&self, p: f64) -> Result<Self, BlockEncodingError> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(BlockEncodingError::InvalidScale(p));
        }
        Ok(Self {
            matrix: self.matrix.scaled_real(1.0 / p),
            ancilla_qubits: self.ancilla_qubits + 1,
            label: format!("{}/{p:.4}", self.label),
            ..self.clone()
        })
    }
    fn amplify(&self, gamma: f64, params: &AmplifyParams) -> Result<Self, BlockEncodingError> {
        params.check_window(&self.block(), gamma)?;
        Ok(Self {
            matrix: self.matrix.scaled_real(gamma),
            ancilla_qubits: self.ancilla_qubits + 1,
            label: format!("amp{gamma:.4}({})", self.label),
            ..self.clone()
        })
    }
    fn pad_ancillas(&self, k: usize) -> Self {
        Self { ancilla_qubits: self.ancilla_qubits + k, ..self.clone() }
    }
    fn postselect_leading(&self, factor_dim: usize) -> Result<Self, BlockEncodingError> {
        let q = factor_qubits(self.system_dim(), factor_dim)?;
        Ok(Self {
            matrix: self.matrix.top_left(self.system_dim() / factor_dim),
            ancilla_qubits: self.ancilla_qubits + q,
            label: format!("⟨0|{}|0⟩", self.label),
            ..self.clone()
        })
    }
    fn subnormalize(&self, alpha: f64) -> Result<Self, BlockEncodingError> {
        if !(alpha >= self.alpha) || !alpha.is_finite() {
            return Err(BlockEncodingError::InvalidSubnormalization(alpha));
        }
        if alpha == self.alpha {
            return Ok(self.clone());
        }
        Ok(Self { alpha, ancilla_qubits: self.ancilla_qubits + 1, ..self.clone() })
    }
    fn compact(&self) -> Result<Self, BlockEncodingError> {
        Ok(self.clone())
    }
}

/// `R_x` rotation with `cos(θ/2) = c` in either backend.
pub fn rx<B: BlockAlgebra>(c: f64) -> Result<B, BlockEncodingError> {
    B::from_unitary(enc::rx_matrix(c)?, &format!("Rx({c:.4})"))
}

/// First column of the encoded operator, i.e. `encoded · |0⟩`.
pub fn first_column<B: BlockAlgebra>(e: &B) -> Vec<Complex64> {
    e.encoded().column(0)
}
