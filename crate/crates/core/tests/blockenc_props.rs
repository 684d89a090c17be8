mod common;

use proptest::prelude::*;
use qkacz_core::blockenc::{
    be_adjoint, be_amplify, be_linear_combination, be_pad_ancillas, be_product, be_recompile, be_scale_down,
    be_subnormalize, be_tensor, dilate, encoded_of, state_prep, AmplifyParams, BlockEncoding, BlockEncodingError, CostConstants,
};
use qkacz_core::linalg::{ComplexMatrix, RealVector};
use qkacz_core::rng::SplitMix64;
use qkacz_core::CostRegime;

const TOL: f64 = 1e-10;

fn operand(rng: &mut SplitMix64, dim: usize, norm: f64) -> (ComplexMatrix, BlockEncoding) {
    let m = common::contraction(rng, dim, norm);
    let e = dilate(&m).unwrap();
    (m, e)
}

fn dims(seed: u64) -> usize {
    [1usize, 2, 4, 8][(seed % 4) as usize]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dilation_encodes_and_is_unitary(seed in any::<u64>(), norm in 0.0f64..=1.0) {
        let mut rng = SplitMix64::new(seed);
        let (m, e) = operand(&mut rng, dims(seed), norm);
        prop_assert!(encoded_of(&e).max_abs_diff(&m) <= TOL);
        prop_assert!(e.unitarity_defect() <= TOL);
        prop_assert_eq!(e.ancilla_qubits(), 1);
    }

    #[test]
    fn product_law(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let d = dims(seed);
        let (a, ea) = operand(&mut rng, d, 0.9);
        let (b, eb) = operand(&mut rng, d, 0.7);
        let p = be_product(&ea, &eb).unwrap();
        prop_assert!(p.encoded().max_abs_diff(&a.matmul(&b).unwrap()) <= TOL);
        prop_assert!(p.unitarity_defect() <= TOL);
        prop_assert_eq!(p.ancilla_qubits(), ea.ancilla_qubits() + eb.ancilla_qubits());
    }

    #[test]
    fn tensor_law(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let (dl, dr) = (dims(seed), dims(seed / 4).min(2));
        let (a, ea) = operand(&mut rng, dl, 0.8);
        let (b, eb) = operand(&mut rng, dr, 0.6);
        let t = be_tensor(&ea, &eb);
        prop_assert!(t.encoded().max_abs_diff(&a.kron(&b)) <= TOL);
        prop_assert!(t.unitarity_defect() <= TOL);
        prop_assert_eq!(t.ancilla_qubits(), ea.ancilla_qubits() + eb.ancilla_qubits());
        prop_assert_eq!(t.system_dim(), dl * dr);
    }

    #[test]
    fn lcu_law(seed in any::<u64>(), s1 in prop::bool::ANY, s2 in prop::bool::ANY) {
        let mut rng = SplitMix64::new(seed);
        let d = dims(seed);
        let (a, ea) = operand(&mut rng, d, 0.9);
        let (b, eb) = operand(&mut rng, d, 0.5);
        let sign = |s: bool| if s { 1.0 } else { -1.0 };
        let l = be_linear_combination(&ea, &eb, (sign(s1), sign(s2))).unwrap();
        let want = a.combine(0.5 * sign(s1), &b, 0.5 * sign(s2)).unwrap();
        prop_assert!(l.encoded().max_abs_diff(&want) <= TOL);
        prop_assert!(l.unitarity_defect() <= TOL);
        prop_assert_eq!(l.ancilla_qubits(), ea.ancilla_qubits() + 1);
    }

    #[test]
    fn scale_law(seed in any::<u64>(), p in 1.0001f64..50.0) {
        let mut rng = SplitMix64::new(seed);
        let (a, ea) = operand(&mut rng, dims(seed), 1.0);
        let s = be_scale_down(&ea, p).unwrap();
        prop_assert!(s.encoded().max_abs_diff(&a.scaled_real(1.0 / p)) <= TOL);
        prop_assert!(s.unitarity_defect() <= TOL);
        prop_assert_eq!(s.ancilla_qubits(), ea.ancilla_qubits() + 1);
    }

    #[test]
    fn amplify_law(seed in any::<u64>(), gamma in 1.01f64..8.0) {
        let mut rng = SplitMix64::new(seed);
        let params = AmplifyParams::default();
        let (a, ea) = operand(&mut rng, dims(seed), (1.0 - params.delta) / gamma);
        let g = be_amplify(&ea, gamma, &params).unwrap();
        prop_assert!(g.encoded().max_abs_diff(&a.scaled_real(gamma)) <= TOL);
        prop_assert!(g.unitarity_defect() <= TOL);
        prop_assert_eq!(g.ancilla_qubits(), ea.ancilla_qubits() + 1);
    }

    #[test]
    fn amplify_undoes_scale(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let (a, ea) = operand(&mut rng, dims(seed), 0.9);
        let back = be_amplify(&be_scale_down(&ea, 2.0).unwrap(), 2.0, &AmplifyParams::default()).unwrap();
        prop_assert!(back.encoded().max_abs_diff(&a) <= TOL);
    }

    #[test]
    fn window_violation_reports_singular_value(seed in any::<u64>(), gamma in 1.5f64..4.0) {
        let mut rng = SplitMix64::new(seed);
        let (_, ea) = operand(&mut rng, dims(seed), 0.95);
        match be_amplify(&ea, gamma, &AmplifyParams::default()) {
            Err(BlockEncodingError::AmplificationWindow { singular_value, limit }) => {
                prop_assert!((singular_value - 0.95).abs() <= 1e-12);
                prop_assert!((limit - 0.99 / gamma).abs() <= 1e-15);
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn composition_chains_stay_unitary(seed in any::<u64>(), len in 1usize..=20) {
        let mut rng = SplitMix64::new(seed);
        let d = dims(seed).min(2);
        let (_, mut e) = operand(&mut rng, d, 0.8);
        let (_, other) = operand(&mut rng, d, 0.5);
        for _ in 0..len {
            if e.total_dim() > 64 {
                e = be_recompile(&e).unwrap();
            }
            e = match rng.next_u64() % 7 {
                0 => be_product(&e, &other).unwrap(),
                1 => be_adjoint(&e),
                2 => be_scale_down(&e, 1.0 + 3.0 * rng.next_f64() + 1e-6).unwrap(),
                3 => {
                    let o = be_subnormalize(&other, e.alpha()).unwrap();
                    let (ea, oa) = (e.ancilla_qubits(), o.ancilla_qubits());
                    let l = be_pad_ancillas(&e, oa.saturating_sub(ea));
                    let r = be_pad_ancillas(&o, ea.saturating_sub(oa));
                    be_linear_combination(&l, &r, (1.0, -1.0)).unwrap()
                }
                4 => be_amplify(&be_scale_down(&e, 2.0).unwrap(), 1.5, &AmplifyParams::default()).unwrap(),
                5 => be_subnormalize(&e, e.alpha() * 1.5).unwrap(),
                _ => be_pad_ancillas(&e, 1),
            };
            prop_assert!(e.unitarity_defect() <= TOL);
        }
    }

    #[test]
    fn row_preparation_column_law(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = SplitMix64::new(seed);
        let v = common::gaussian_vector(&mut rng, n);
        let v = v.scaled(1.0 / v.norm());
        let prep = state_prep(&v, CostRegime::Structured, &CostConstants::default()).unwrap();
        let u = prep.encoding().unitary();
        let ud = be_adjoint(prep.encoding());
        for i in 0..n {
            prop_assert!((u[(i, 0)].re - v[i]).abs() <= TOL && u[(i, 0)].im == 0.0);
            prop_assert!((ud.unitary()[(0, i)] - u[(i, 0)].conj()).norm() <= TOL);
        }
        prop_assert!(u.unitarity_defect() <= TOL);
    }
}

#[test]
fn spec_scalar_examples() {
    let s = |v: f64| ComplexMatrix::new(1, vec![v.into()]).unwrap();
    let half = dilate(&s(0.5)).unwrap();
    assert!((be_product(&half, &half).unwrap().encoded()[(0, 0)].re - 0.25).abs() < 1e-15);
    let id = dilate(&ComplexMatrix::identity(2)).unwrap();
    assert!(be_product(&id, &id).unwrap().encoded().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    assert!(be_scale_down(&id, 2.0).unwrap().encoded().max_abs_diff(&ComplexMatrix::identity(2).scaled_real(0.5)) < 1e-15);
    let tiny = be_scale_down(&half, 1.0 + 1e-15).unwrap();
    assert!((tiny.encoded()[(0, 0)].re - 0.5).abs() < 1e-12);
    let z = ComplexMatrix::new(2, vec![1.0.into(), 0.0.into(), 0.0.into(), (-1.0).into()]).unwrap();
    let ez = BlockEncoding::from_unitary(z.clone(), "Z").unwrap();
    assert!(be_linear_combination(&ez, &ez, (1.0, 1.0)).unwrap().encoded().max_abs_diff(&z) < 1e-15);
    let ei = BlockEncoding::identity(2);
    assert!(be_linear_combination(&ei, &ei, (1.0, -1.0)).unwrap().encoded().max_abs() < 1e-15);
}

#[test]
fn step_one_core_identity() {
    let v = RealVector::new(vec![0.6, 0.8]).unwrap();
    let prep = state_prep(&v, CostRegime::Structured, &CostConstants::default()).unwrap();
    let mut x = ComplexMatrix::zeros(2);
    x[(0, 0)] = 1.0.into();
    let ux = dilate(&x).unwrap();
    let p = be_product(&be_adjoint(prep.encoding()), &ux).unwrap();
    assert!((p.encoded()[(0, 0)].re - 0.6).abs() < 1e-15);
}

#[test]
fn tensor_first_column_is_kronecker_of_columns() {
    let mut rng = SplitMix64::new(3);
    for _ in 0..20 {
        let a = BlockEncoding::from_unitary(common::unitary(&mut rng, 2), "A").unwrap();
        let b = BlockEncoding::from_unitary(common::unitary(&mut rng, 2), "B").unwrap();
        let t = be_tensor(&a, &b).encoded();
        let (ca, cb) = (a.encoded().column(0), b.encoded().column(0));
        for i in 0..2 {
            for j in 0..2 {
                assert!((t[(2 * i + j, 0)] - ca[i] * cb[j]).norm() < 1e-14);
            }
        }
    }
}

