use proptest::prelude::*;
use qkacz_core::linalg::SpectralSummary;
use qkacz_core::resources::{ledger_advance, ledger_closed_form, complexity_estimate, ResourceLedger, StepCosts};
use qkacz_core::CostRegime;

fn rank(r: usize) -> SpectralSummary {
    SpectralSummary { sigma_min: 0.1, sigma_max: 1.0, rank: r, frob_sq: r as f64, kappa: Some(10.0), singular_values: vec![] }
}

proptest! {
    #[test]
    fn recursion_matches_closed_form(c0 in 0u128..=u32::MAX as u128, c in 0u128..=u32::MAX as u128, t in 0u32..=30) {
        let mut ledger = ResourceLedger::new(c0, c);
        for _ in 0..t {
            ledger_advance(&mut ledger, &StepCosts::default());
        }
        prop_assert_eq!(Some(ledger.current()), ledger_closed_form(c0, c, t));
        for (k, ck) in ledger.per_step.iter().enumerate() {
            prop_assert_eq!(Some(*ck), ledger_closed_form(c0, c, k as u32));
        }
    }

    #[test]
    fn estimate_is_monotone(
        r in 1usize..=20,
        x in 0.01f64..=1.0,
        eps in 1e-6f64..0.5,
        m in 1usize..=1 << 20,
        s in 1usize..=1024,
        sparse in any::<bool>(),
    ) {
        let regime = if sparse { CostRegime::SparseGeneral } else { CostRegime::Structured };
        let v = |r: usize, x: f64, eps: f64, m: usize, s: usize| complexity_estimate(&rank(r), x, eps, m, s, regime).unwrap().value;
        let base = v(r, x, eps, m, s);
        prop_assert!(v(r + 1, x, eps, m, s) >= base);
        prop_assert!(v(r, x, eps / 2.0, m, s) >= base);
        prop_assert!(v(r, x, eps, m + 1, s) >= base);
        prop_assert!(v(r, x, eps, m, s + 1) >= base);
        prop_assert!(v(r, (x * 1.5).min(1.0), eps, m, s) <= base);
    }
}
