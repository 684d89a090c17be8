//! Full-unitary block encodings and the combinators that compose them.
//!
//! Index layout: every unitary acts on `ancillas ⊗ system`, with the ancilla
//! register leading. The encoded operator is `α · ⟨0|ᵃ U |0⟩ᵃ`, i.e. `α`
//! times the leading `d × d` block.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::BlockEncodingError;
use crate::linalg::{svd, ComplexMatrix, RealMatrix};

/// Tolerance on `‖U†U − I‖_max` for externally supplied unitaries.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Slack on `‖M‖ ≤ 1` accepted by [`dilate`].
pub const CONTRACTION_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct BlockEncoding {
    unitary: ComplexMatrix,
    ancilla_qubits: usize,
    system_dim: usize,
    alpha: f64,
    label: String,
}

impl BlockEncoding {
    /// Validating constructor.
    pub fn new(
        unitary: ComplexMatrix,
        ancilla_qubits: usize,
        system_dim: usize,
        alpha: f64,
        label: impl Into<String>,
    ) -> Result<Self, BlockEncodingError> {
        let expected = (1usize << ancilla_qubits) * system_dim;
        if unitary.dim() != expected {
            return Err(BlockEncodingError::DimensionMismatch { left: unitary.dim(), right: expected });
        }
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(BlockEncodingError::InvalidSubnormalization(alpha));
        }
        let defect = unitary.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(BlockEncodingError::NotUnitary { defect });
        }
        Ok(Self::from_parts(unitary, ancilla_qubits, system_dim, alpha, label.into()))
    }

    /// A plain unitary viewed as a zero-ancilla encoding of itself.
    pub fn from_unitary(unitary: ComplexMatrix, label: impl Into<String>) -> Result<Self, BlockEncodingError> {
        let d = unitary.dim();
        Self::new(unitary, 0, d, 1.0, label)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_parts(ComplexMatrix::identity(dim), 0, dim, 1.0, format!("I{dim}"))
    }

    pub(crate) fn from_parts(unitary: ComplexMatrix, ancilla_qubits: usize, system_dim: usize, alpha: f64, label: String) -> Self {
        debug_assert_eq!(unitary.dim(), (1usize << ancilla_qubits) * system_dim);
        Self { unitary, ancilla_qubits, system_dim, alpha, label }
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn ancilla_qubits(&self) -> usize {
        self.ancilla_qubits
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn total_dim(&self) -> usize {
        self.unitary.dim()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `⟨0|ᵃ U |0⟩ᵃ` without the subnormalization.
    pub fn block(&self) -> ComplexMatrix {
        self.unitary.top_left(self.system_dim)
    }

    /// The encoded operator `α · ⟨0|ᵃ U |0⟩ᵃ`.
    pub fn encoded(&self) -> ComplexMatrix {
        self.block().scaled_real(self.alpha)
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.unitary.unitarity_defect()
    }
}

/// The encoded operator of `e`.
pub fn encoded_of(e: &BlockEncoding) -> ComplexMatrix {
    e.encoded()
}

/// Extra uses of `E`/`E†` charged for one idealized amplification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifyParams {
    /// Window margin: singular values must stay at or below `(1 − δ)/γ`.
    pub delta: f64,
    /// Target relative accuracy of the (not computed) phase sequence.
    pub eps: f64,
}

impl Default for AmplifyParams {
    fn default() -> Self {
        Self { delta: 0.01, eps: 1e-3 }
    }
}

impl AmplifyParams {
    /// `⌈(γ/δ) · ln(γ/ε)⌉`
    pub fn query_count(&self, gamma: f64) -> u64 {
        ((gamma / self.delta) * (gamma / self.eps).ln()).ceil() as u64
    }

    fn validate(&self) -> Result<(), BlockEncodingError> {
        if self.delta > 0.0 && self.delta < 0.5 && self.eps > 0.0 && self.eps < 0.5 {
            Ok(())
        } else {
            Err(BlockEncodingError::InvalidAmplifyParams { delta: self.delta, eps: self.eps })
        }
    }

    /// Fails unless every singular value `ς` of `block` satisfies `γς ≤ 1 − δ`.
    pub(crate) fn check_window(&self, block: &ComplexMatrix, gamma: f64) -> Result<(), BlockEncodingError> {
        self.validate()?;
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(BlockEncodingError::InvalidGamma(gamma));
        }
        let top = block.operator_norm()?;
        let limit = (1.0 - self.delta) / gamma;
        if top > limit * (1.0 + CONTRACTION_SLACK) {
            return Err(BlockEncodingError::AmplificationWindow { singular_value: top, limit });
        }
        Ok(())
    }
}

/// Unitary dilation `[[M, √(I−MM†)], [√(I−M†M), −M†]]` of a contraction.
pub fn dilate(m: &ComplexMatrix) -> Result<BlockEncoding, BlockEncodingError> {
    let unitary = dilation_matrix(m)?;
    Ok(BlockEncoding::from_parts(unitary, 1, m.dim(), 1.0, "dilate".into()))
}

pub(crate) fn dilation_matrix(m: &ComplexMatrix) -> Result<ComplexMatrix, BlockEncodingError> {
    let d = m.dim();
    // Defect blocks from one SVD of the real representation, so that
    // M·√(I−M†M) = √(I−MM†)·M holds to rounding.
    let dec = svd(&m.real_embedding())?;
    let top = dec.s.as_slice().first().copied().unwrap_or(0.0);
    if top > 1.0 + CONTRACTION_SLACK {
        return Err(BlockEncodingError::NotContraction { norm: top });
    }
    // Each singular value of M appears twice in the real embedding. Use one
    // value per pair: near s = 1 a one-ulp gap between the copies becomes a
    // 1e-8 gap in √(1 − s²) and breaks the complex structure.
    let s = dec.s.as_slice();
    let defect: Vec<f64> = (0..s.len())
        .map(|i| {
            let pair = 0.5 * (s[i & !1] + s[i | 1]);
            (1.0 - pair.min(1.0).powi(2)).max(0.0).sqrt()
        })
        .collect();
    let left = ComplexMatrix::from_real_embedding(&conjugate_diag(&dec.u, &defect));
    let right = ComplexMatrix::from_real_embedding(&conjugate_diag(&dec.v, &defect));

    let mut u = ComplexMatrix::zeros(2 * d);
    for i in 0..d {
        for j in 0..d {
            u[(i, j)] = m[(i, j)];
            u[(i, j + d)] = left[(i, j)];
            u[(i + d, j)] = right[(i, j)];
            u[(i + d, j + d)] = -m[(j, i)].conj();
        }
    }
    Ok(u)
}

/// `Q diag(c) Qᵀ`
fn conjugate_diag(q: &RealMatrix, c: &[f64]) -> RealMatrix {
    let n = q.rows();
    let mut out = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = (0..c.len()).map(|l| q[(i, l)] * c[l] * q[(j, l)]).sum();
        }
    }
    out
}

/// `U†`, encoding the adjoint operator.
pub fn be_adjoint(e: &BlockEncoding) -> BlockEncoding {
    BlockEncoding::from_parts(e.unitary.adjoint(), e.ancilla_qubits, e.system_dim, e.alpha, format!("{}^†", e.label))
}

/// Encodes `encoded(L) · encoded(R)` with `α = α_L α_R`; the ancilla
/// registers are stacked (`L`'s leading).
pub fn be_product(l: &BlockEncoding, r: &BlockEncoding) -> Result<BlockEncoding, BlockEncodingError> {
    if l.system_dim != r.system_dim {
        return Err(BlockEncodingError::DimensionMismatch { left: l.system_dim, right: r.system_dim });
    }
    let d = l.system_dim;
    let (al, ar) = (1usize << l.ancilla_qubits, 1usize << r.ancilla_qubits);
    let dim = al * ar * d;
    let ul = &l.unitary;
    let ur = &r.unitary;
    let mut out = ComplexMatrix::zeros(dim);
    // out[(iL,iR,s),(jL,jR,t)] = Σ_u UL[(iL,s),(jL,u)] · UR[(iR,u),(jR,t)]
    for il in 0..al {
        for s in 0..d {
            let lrow = il * d + s;
            for jl in 0..al {
                for u in 0..d {
                    let lv = ul[(lrow, jl * d + u)];
                    if lv.re == 0.0 && lv.im == 0.0 {
                        continue;
                    }
                    for ir in 0..ar {
                        let row = (il * ar + ir) * d + s;
                        let rrow = ir * d + u;
                        for jr in 0..ar {
                            for t in 0..d {
                                out[(row, (jl * ar + jr) * d + t)] += lv * ur[(rrow, jr * d + t)];
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(BlockEncoding::from_parts(
        out,
        l.ancilla_qubits + r.ancilla_qubits,
        d,
        l.alpha * r.alpha,
        format!("({}·{})", l.label, r.label),
    ))
}

/// Encodes `encoded(L) ⊗ encoded(R)`. Registers are reordered to
/// `(anc_L, anc_R, sys_L, sys_R)` so that all ancillas lead.
pub fn be_tensor(l: &BlockEncoding, r: &BlockEncoding) -> BlockEncoding {
    let (al, ar) = (1usize << l.ancilla_qubits, 1usize << r.ancilla_qubits);
    let (dl, dr) = (l.system_dim, r.system_dim);
    let dim = al * ar * dl * dr;
    let idx = |ia: usize, ib: usize, sa: usize, sb: usize| ((ia * ar + ib) * dl + sa) * dr + sb;
    let mut out = ComplexMatrix::zeros(dim);
    for il in 0..al {
        for sl in 0..dl {
            for jl in 0..al {
                for tl in 0..dl {
                    let lv = l.unitary[(il * dl + sl, jl * dl + tl)];
                    if lv.re == 0.0 && lv.im == 0.0 {
                        continue;
                    }
                    for ir in 0..ar {
                        for sr in 0..dr {
                            for jr in 0..ar {
                                for tr in 0..dr {
                                    out[(idx(il, ir, sl, sr), idx(jl, jr, tl, tr))] =
                                        lv * r.unitary[(ir * dr + sr, jr * dr + tr)];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    BlockEncoding::from_parts(
        out,
        l.ancilla_qubits + r.ancilla_qubits,
        dl * dr,
        l.alpha * r.alpha,
        format!("({}⊗{})", l.label, r.label),
    )
}

fn check_sign(s: f64) -> Result<(), BlockEncodingError> {
    if s == 1.0 || s == -1.0 {
        Ok(())
    } else {
        Err(BlockEncodingError::InvalidSign(s))
    }
}

pub(crate) fn check_lcu_operands(
    (la, ld, lalpha): (usize, usize, f64),
    (ra, rd, ralpha): (usize, usize, f64),
    signs: (f64, f64),
) -> Result<(), BlockEncodingError> {
    check_sign(signs.0)?;
    check_sign(signs.1)?;
    if ld != rd {
        return Err(BlockEncodingError::DimensionMismatch { left: ld, right: rd });
    }
    if la != ra {
        return Err(BlockEncodingError::AncillaMismatch { left: la, right: ra });
    }
    if (lalpha - ralpha).abs() > 1e-12 * lalpha.max(ralpha) {
        return Err(BlockEncodingError::AlphaMismatch { left: lalpha, right: ralpha });
    }
    Ok(())
}

/// Two-term LCU with a Hadamard-prepared select qubit:
/// encodes `(s₁·encoded(L) + s₂·encoded(R)) / 2`.
///
/// Operands must have equal subnormalization and share one ancilla layout.
pub fn be_linear_combination(
    l: &BlockEncoding,
    r: &BlockEncoding,
    signs: (f64, f64),
) -> Result<BlockEncoding, BlockEncodingError> {
    check_lcu_operands(
        (l.ancilla_qubits, l.system_dim, l.alpha),
        (r.ancilla_qubits, r.system_dim, r.alpha),
        signs,
    )?;
    let n = l.total_dim();
    let mut out = ComplexMatrix::zeros(2 * n);
    let (s1, s2) = (signs.0 * 0.5, signs.1 * 0.5);
    for i in 0..n {
        for j in 0..n {
            let a = l.unitary[(i, j)] * s1;
            let b = r.unitary[(i, j)] * s2;
            out[(i, j)] = a + b;
            out[(i, j + n)] = a - b;
            out[(i + n, j)] = a - b;
            out[(i + n, j + n)] = a + b;
        }
    }
    let op = |s: f64| if s > 0.0 { "+" } else { "-" };
    Ok(BlockEncoding::from_parts(
        out,
        l.ancilla_qubits + 1,
        l.system_dim,
        l.alpha,
        format!("[{}{} {}{}]/2", op(signs.0), l.label, op(signs.1), r.label),
    ))
}

/// Encodes `encoded(E) / p` by a leading ancilla rotated to amplitude `1/p`.
pub fn be_scale_down(e: &BlockEncoding, p: f64) -> Result<BlockEncoding, BlockEncodingError> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(BlockEncodingError::InvalidScale(p));
    }
    let c = 1.0 / p;
    let s = (1.0 - c * c).sqrt();
    let n = e.total_dim();
    let mut out = ComplexMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = e.unitary[(i, j)];
            out[(i, j)] = v * c;
            out[(i, j + n)] = v * (-s);
            out[(i + n, j)] = v * s;
            out[(i + n, j + n)] = v * c;
        }
    }
    Ok(BlockEncoding::from_parts(out, e.ancilla_qubits + 1, e.system_dim, e.alpha, format!("{}/{p:.4}", e.label)))
}

/// Idealized singular-value amplification: the result encodes exactly
/// `γ · encoded(E)`. The phase sequence is not synthesized; callers charge
/// [`AmplifyParams::query_count`] uses of `E` to their ledger.
///
/// The new unitary is the dilation of the amplified block, padded with the
/// identity to occupy `E`'s registers plus one extra ancilla.
pub fn be_amplify(e: &BlockEncoding, gamma: f64, params: &AmplifyParams) -> Result<BlockEncoding, BlockEncodingError> {
    let block = e.block();
    params.check_window(&block, gamma)?;
    let dil = dilation_matrix(&block.scaled_real(gamma))?;
    let dim = 2 * e.total_dim();
    Ok(BlockEncoding::from_parts(
        dil.embed_with_identity(dim),
        e.ancilla_qubits + 1,
        e.system_dim,
        e.alpha,
        format!("amp{gamma:.4}({})", e.label),
    ))
}

/// Adds `k` idle ancilla qubits in front; the block is unchanged.
pub fn be_pad_ancillas(e: &BlockEncoding, k: usize) -> BlockEncoding {
    if k == 0 {
        return e.clone();
    }
    let copies = 1usize << k;
    let n = e.total_dim();
    let mut out = ComplexMatrix::zeros(copies * n);
    for c in 0..copies {
        for i in 0..n {
            for j in 0..n {
                out[(c * n + i, c * n + j)] = e.unitary[(i, j)];
            }
        }
    }
    BlockEncoding::from_parts(out, e.ancilla_qubits + k, e.system_dim, e.alpha, e.label.clone())
}

/// Treats the leading `factor_dim`-dimensional system factor as additional
/// ancilla qubits, post-selected on `|0⟩`. For `E` encoding `X ⊗ Y` with `X`
/// of size `factor_dim`, the result encodes `X₀₀ · Y`.
pub fn be_postselect_leading(e: &BlockEncoding, factor_dim: usize) -> Result<BlockEncoding, BlockEncodingError> {
    let qubits = factor_qubits(e.system_dim, factor_dim)?;
    Ok(BlockEncoding::from_parts(
        e.unitary.clone(),
        e.ancilla_qubits + qubits,
        e.system_dim / factor_dim,
        e.alpha,
        format!("⟨0|{}|0⟩", e.label),
    ))
}

pub(crate) fn factor_qubits(system_dim: usize, factor_dim: usize) -> Result<usize, BlockEncodingError> {
    if factor_dim == 0 || !factor_dim.is_power_of_two() || !system_dim.is_multiple_of(factor_dim) {
        return Err(BlockEncodingError::DimensionMismatch { left: system_dim, right: factor_dim });
    }
    Ok(factor_dim.trailing_zeros() as usize)
}

/// Re-expresses `E` with a larger subnormalization `alpha` (the block is
/// scaled down by `alpha/α_E`); the encoded operator is unchanged.
pub fn be_subnormalize(e: &BlockEncoding, alpha: f64) -> Result<BlockEncoding, BlockEncodingError> {
    if !(alpha >= e.alpha) || !alpha.is_finite() {
        return Err(BlockEncodingError::InvalidSubnormalization(alpha));
    }
    if alpha == e.alpha {
        return Ok(e.clone());
    }
    let mut out = be_scale_down(e, alpha / e.alpha)?;
    out.alpha = alpha;
    Ok(out)
}

/// Idealized re-synthesis: a fresh one-ancilla dilation of `E`'s block with
/// the same subnormalization. Used to keep full-unitary simulation tractable
/// across iterations.
pub fn be_recompile(e: &BlockEncoding) -> Result<BlockEncoding, BlockEncodingError> {
    let unitary = dilation_matrix(&e.block())?;
    Ok(BlockEncoding::from_parts(unitary, 1, e.system_dim, e.alpha, e.label.clone()))
}

/// `R_x(θ)` with `cos(θ/2) = c`, as a zero-ancilla encoding of itself.
pub fn rx_encoding(c: f64) -> Result<BlockEncoding, BlockEncodingError> {
    Ok(BlockEncoding::from_parts(rx_matrix(c)?, 0, 2, 1.0, format!("Rx({c:.4})")))
}

pub(crate) fn rx_matrix(c: f64) -> Result<ComplexMatrix, BlockEncodingError> {
    if !(c.abs() <= 1.0) {
        return Err(BlockEncodingError::NotContraction { norm: c.abs() });
    }
    let theta = 2.0 * c.acos();
    let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let mi = Complex64::new(0.0, -sn);
    Ok(ComplexMatrix::new(2, vec![Complex64::new(cs, 0.0), mi, mi, Complex64::new(cs, 0.0)])?)
}
