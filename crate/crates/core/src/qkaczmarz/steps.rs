//! The five steps of one block-encoded Kaczmarz iteration.
//!
//! Each step is generic over the [`BlockAlgebra`] backend and records the
//! uses of `U_x` and `U_j` it makes, plus amplification queries, in a
//! [`StepCosts`].

use crate::blockenc::{rx, AmplifyParams, BlockAlgebra};
use crate::classical::KaczmarzError;
use crate::resources::StepCosts;

use super::QuantumError;

/// Row norms closer to one than this are treated as exactly one.
const UNIT_SLACK: f64 = 1e-15;

/// Pads whichever operand has fewer ancillas so both match.
fn align<B: BlockAlgebra>(l: &B, r: &B) -> (B, B) {
    let (la, ra) = (l.ancilla_qubits(), r.ancilla_qubits());
    (l.pad_ancillas(ra.saturating_sub(la)), r.pad_ancillas(la.saturating_sub(ra)))
}

/// Multiplies the encoded operator by `g > 0`: scaling down below one,
/// amplifying above one.
fn rescale<B: BlockAlgebra>(e: &B, g: f64, params: &AmplifyParams, costs: &mut StepCosts) -> Result<B, QuantumError> {
    if (g - 1.0).abs() <= UNIT_SLACK {
        Ok(e.clone())
    } else if g < 1.0 {
        Ok(e.scale_down(1.0 / g)?)
    } else {
        let out = e.amplify(g, params)?;
        costs.amplification_queries += params.query_count(g);
        Ok(out)
    }
}

fn check_row_norm(row_norm: f64) -> Result<(), QuantumError> {
    if !(row_norm > 0.0) {
        return Err(QuantumError::ZeroRowNorm);
    }
    if row_norm > 1.0 + 1e-12 {
        return Err(KaczmarzError::NotNormalized { operator_norm: row_norm, rhs_norm: f64::NAN }.into());
    }
    Ok(())
}

/// `‖a‖ · U_j† U_x`, whose top-left entry is `aᵀx`.
pub fn step1_inner_product<B: BlockAlgebra>(ux: &B, prep: &B, row_norm: f64, costs: &mut StepCosts) -> Result<B, QuantumError> {
    check_row_norm(row_norm)?;
    let prod = prep.adjoint().product(ux)?;
    costs.invocations.iterate += 1;
    costs.invocations.row_prep += 1;
    if row_norm < 1.0 - UNIT_SLACK {
        Ok(prod.scale_down(1.0 / row_norm)?)
    } else {
        Ok(prod)
    }
}

/// `R_x(θ)` with `cos(θ/2) = b_j`.
pub fn step2_rx<B: BlockAlgebra>(b_j: f64) -> Result<B, QuantumError> {
    if !(b_j.abs() <= 1.0) {
        return Err(QuantumError::RhsNotNormalized { value: b_j });
    }
    Ok(rx(b_j)?)
}

/// Encodes `(λ/2)(b_j − aᵀx) · U_j / ‖a‖`, whose first column is
/// `(λ/2)(b_j − aᵀx) a / ‖a‖²`.
///
/// Built as `½(R_x ⊗ I − ‖a‖U_j†U_x)` by LCU, tensored with `U_j`, with the
/// leading system factor post-selected, then rescaled by `λ/‖a‖`.
#[allow(clippy::too_many_arguments)]
pub fn step3_residual_column<B: BlockAlgebra>(
    step1: &B,
    step2: &B,
    prep: &B,
    row_norm: f64,
    lambda: f64,
    params: &AmplifyParams,
    costs: &mut StepCosts,
) -> Result<B, QuantumError> {
    check_row_norm(row_norm)?;
    if !(lambda > 0.0 && lambda <= 4.0) {
        return Err(QuantumError::InvalidLambda(lambda));
    }
    let d = step1.system_dim();
    if step2.system_dim() != 2 || d < 2 || !d.is_multiple_of(2) {
        return Err(QuantumError::Register { dim: d });
    }
    let rot = step2.tensor(&B::identity(d / 2)).subnormalize(step1.alpha())?;
    let (rot, inner) = align(&rot, step1);
    let xi = rot.linear_combination(&inner, (1.0, -1.0))?;
    let column = xi.tensor(prep).postselect_leading(d)?;
    costs.invocations.row_prep += 1;
    rescale(&column, lambda / row_norm, params, costs)
}

/// LCU of `U_x` and the residual with signs `(+, +)`: encodes `½x⁽ᵏ⁺¹⁾` in the
/// first column.
pub fn step4_combine<B: BlockAlgebra>(ux: &B, residual: &B, costs: &mut StepCosts) -> Result<B, QuantumError> {
    let (ux, residual) = align(ux, residual);
    let out = ux.linear_combination(&residual, (1.0, 1.0))?;
    costs.invocations.iterate += 1;
    Ok(out)
}

/// Removes the LCU's factor ½ by amplifying with `γ = 2`.
pub fn step5_deflate<B: BlockAlgebra>(half: &B, params: &AmplifyParams, costs: &mut StepCosts) -> Result<B, QuantumError> {
    let out = half.amplify(2.0, params)?;
    costs.amplification_queries += params.query_count(2.0);
    Ok(out)
}

/// All five steps; the relaxation `lambda` is the classical one.
#[allow(clippy::too_many_arguments)]
pub(crate) fn iterate_once<B: BlockAlgebra>(
    ux: &B,
    prep: &B,
    row_norm: f64,
    b_j: f64,
    lambda: f64,
    params: &AmplifyParams,
    costs: &mut StepCosts,
) -> Result<B, QuantumError> {
    let inner = step1_inner_product(ux, prep, row_norm, costs)?;
    let rot = step2_rx::<B>(b_j)?;
    // Step 4's LCU halves the residual too, so step 3 carries 2λ.
    let residual = step3_residual_column(&inner, &rot, prep, row_norm, 2.0 * lambda, params, costs)?;
    let half = step4_combine(ux, &residual, costs)?;
    step5_deflate(&half, params, costs)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::blockenc::{householder_completion, BlockEncoding, EncodedOperator};
    use crate::linalg::{ComplexMatrix, RealVector};

    fn column_state<B: BlockAlgebra>(x: &[f64]) -> B {
        let d = x.len();
        let mut m = ComplexMatrix::zeros(d);
        for (i, v) in x.iter().enumerate() {
            m[(i, 0)] = Complex64::new(*v, 0.0);
        }
        B::dilate(&m, "x").unwrap()
    }

    fn prep<B: BlockAlgebra>(a: &[f64]) -> B {
        let n = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        let v = RealVector::new(a.iter().map(|x| x / n).collect()).unwrap();
        B::from_unitary(ComplexMatrix::from_real(&householder_completion(&v)).unwrap(), "U_j").unwrap()
    }

    fn top_left<B: BlockAlgebra>(e: &B) -> Complex64 {
        e.encoded()[(0, 0)]
    }

    fn step1_cases<B: BlockAlgebra>() {
        let mut c = StepCosts::default();
        let s = step1_inner_product(&column_state::<B>(&[0.3, 0.4]), &prep::<B>(&[1.0, 0.0]), 1.0, &mut c).unwrap();
        assert!((top_left(&s) - Complex64::new(0.3, 0.0)).norm() < 1e-12);
        let a = [0.3, 0.4];
        let s = step1_inner_product(&column_state::<B>(&[0.6, 0.8]), &prep::<B>(&a), 0.5, &mut c).unwrap();
        assert!((top_left(&s).re - 0.5).abs() < 1e-12);
        let s = step1_inner_product(&column_state::<B>(&[0.8, -0.6]), &prep::<B>(&[0.6, 0.8]), 1.0, &mut c).unwrap();
        assert!(top_left(&s).norm() < 1e-12);
        assert_eq!((c.invocations.iterate, c.invocations.row_prep), (3, 3));
    }

    #[test]
    fn step1_examples() {
        step1_cases::<EncodedOperator>();
        step1_cases::<BlockEncoding>();
    }

    #[test]
    fn step2_examples() {
        let r: EncodedOperator = step2_rx(0.6).unwrap();
        assert!((r.encoded()[(0, 1)] - Complex64::new(0.0, -0.8)).norm() < 1e-15);
        assert!(matches!(step2_rx::<EncodedOperator>(1.1), Err(QuantumError::RhsNotNormalized { .. })));
    }

    fn step3_case<B: BlockAlgebra>(a: &[f64], x: &[f64], b: f64, lambda: f64) -> Vec<f64> {
        let mut c = StepCosts::default();
        let p = params();
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        let u = prep::<B>(a);
        let s1 = step1_inner_product(&column_state::<B>(x), &u, norm, &mut c).unwrap();
        let s2 = step2_rx::<B>(b).unwrap();
        let r = step3_residual_column(&s1, &s2, &u, norm, lambda, &p, &mut c).unwrap();
        r.encoded().column(0).iter().map(|z| z.re).collect()
    }

    fn params() -> AmplifyParams {
        AmplifyParams { delta: 0.01, eps: 1e-3 }
    }

    #[test]
    fn step3_examples() {
        let col = step3_case::<EncodedOperator>(&[1.0, 0.0], &[0.0, 0.0], 0.5, 1.0);
        assert!((col[0] - 0.25).abs() < 1e-12 && col[1].abs() < 1e-12);
        let full = step3_case::<BlockEncoding>(&[1.0, 0.0], &[0.0, 0.0], 0.5, 1.0);
        assert!((full[0] - 0.25).abs() < 1e-10 && full[1].abs() < 1e-10);
        let zero = step3_case::<EncodedOperator>(&[0.6, 0.8], &[0.3, 0.4], 0.5, 1.0);
        assert!(zero.iter().all(|v| v.abs() < 1e-12));
        let double = step3_case::<EncodedOperator>(&[1.0, 0.0], &[0.0, 0.0], 0.5, 2.0);
        assert!((double[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn one_iteration_on_identity() {
        let mut c = StepCosts::default();
        let ux = column_state::<EncodedOperator>(&[0.0, 0.0]);
        let next = iterate_once(&ux, &prep(&[1.0, 0.0]), 1.0, 0.6, 1.0, &params(), &mut c).unwrap();
        let col = next.encoded().column(0);
        assert!((col[0].re - 0.6).abs() < 1e-12 && col[1].norm() < 1e-12);
        assert_eq!(next.alpha(), ux.alpha());
        assert_eq!((c.invocations.iterate, c.invocations.row_prep), (2, 2));
    }

    #[test]
    fn zero_residual_halves() {
        let mut c = StepCosts::default();
        let ux = column_state::<EncodedOperator>(&[0.3, 0.4]);
        let u = prep::<EncodedOperator>(&[0.6, 0.8]);
        let s1 = step1_inner_product(&ux, &u, 1.0, &mut c).unwrap();
        let r = step3_residual_column(&s1, &step2_rx(0.5).unwrap(), &u, 1.0, 2.0, &params(), &mut c).unwrap();
        let half = step4_combine(&ux, &r, &mut c).unwrap();
        let col = half.encoded().column(0);
        assert!((col[0].re - 0.15).abs() < 1e-12 && (col[1].re - 0.2).abs() < 1e-12);
        let back = step5_deflate(&half, &params(), &mut c).unwrap();
        assert!((back.encoded()[(0, 0)].re - 0.3).abs() < 1e-12);
    }
}
