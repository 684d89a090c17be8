mod common;

use proptest::prelude::*;
use qkacz_core::classical::{
    convergence_bound, iteration_count, iteration_estimate, kaczmarz_step, norm_weighted_probabilities, run_kaczmarz,
    t_lower_bound, t_upper_bound, RowSelector,
};
use qkacz_core::linalg::{RealMatrix, RealVector};
use qkacz_core::rng::{trial_seed, SplitMix64};
use qkacz_core::{LinearSystem, SelectionStrategy, StoppingRule};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unit_relaxation_lands_on_hyperplane(seed in any::<u64>(), n in 1usize..=10, m in 1usize..=10) {
        let mut rng = SplitMix64::new(seed);
        let sys = common::generic_system(&mut rng, n, m);
        let x = common::gaussian_vector(&mut rng, m);
        let j = (rng.next_u64() % n as u64) as usize;
        let next = kaczmarz_step(&x, &sys, j, 1.0).unwrap();
        let ax: f64 = sys.row(j).iter().zip(next.iter()).map(|(a, v)| a * v).sum();
        prop_assert!((ax - sys.b()[j]).abs() <= 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn relaxed_step_never_moves_away(seed in any::<u64>(), lambda in 0.01f64..=2.0) {
        let mut rng = SplitMix64::new(seed);
        let sys = common::generic_system(&mut rng, 6, 4);
        let x = common::gaussian_vector(&mut rng, 4);
        let j = (rng.next_u64() % 6) as usize;
        let gap = |v: &RealVector| (sys.row(j).iter().zip(v.iter()).map(|(a, b)| a * b).sum::<f64>() - sys.b()[j]).abs();
        let next = kaczmarz_step(&x, &sys, j, lambda).unwrap();
        prop_assert!(gap(&next) <= gap(&x) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn identical_seeds_select_identical_rows(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(7);
        let sys = common::generic_system(&mut rng, 9, 3);
        let run = || run_kaczmarz(&sys, SelectionStrategy::norm_weighted(seed), 1.0, StoppingRule::FixedSteps(40), &RealVector::zeros(3), None)
            .unwrap()
            .selected_rows;
        prop_assert_eq!(run(), run());
    }
}

#[test]
fn selection_frequencies_follow_row_norms() {
    let mut rng = SplitMix64::new(11);
    let sys = common::generic_system(&mut rng, 5, 3);
    let p = norm_weighted_probabilities(&sys);
    let sel = RowSelector::new(SelectionStrategy::norm_weighted(3), &sys).unwrap();
    let draws = 200_000u64;
    let mut counts = [0u64; 5];
    for k in 0..draws {
        counts[sel.select(k)] += 1;
    }
    for j in 0..5 {
        let f = counts[j] as f64 / draws as f64;
        let sd = (p[j] * (1.0 - p[j]) / draws as f64).sqrt();
        assert!((f - p[j]).abs() <= 5.0 * sd, "row {j}: {f} vs {}", p[j]);
    }
}

#[test]
fn expected_error_stays_under_rate_bound() {
    let mut rng = SplitMix64::new(2024);
    let sys = common::consistent_system(&mut rng, 30, 10);
    let sol = sys.least_squares_solution().unwrap();
    let x0 = RealVector::zeros(10);
    let (trials, steps) = (200usize, 200usize);
    let mut mean = vec![0.0; steps + 1];
    for t in 0..trials {
        let strat = SelectionStrategy::norm_weighted(trial_seed(99, t as u64));
        let tr = run_kaczmarz(&sys, strat, 1.0, StoppingRule::FixedSteps(steps), &x0, Some(&sol)).unwrap();
        for (acc, e) in mean.iter_mut().zip(&tr.errors_sq) {
            *acc += e / trials as f64;
        }
    }
    let init = x0.dist_sq(&sol);
    let slack = 1.0 + 3.0 / (trials as f64).sqrt();
    for (k, e) in mean.iter().enumerate() {
        let bound = convergence_bound(sys.spectral(), init, k as u64).unwrap();
        assert!(*e <= bound * slack, "k={k}: {e} > {bound}");
    }
}

#[test]
fn iteration_bounds_sandwich_the_estimate() {
    let mut rng = SplitMix64::new(5);
    for _ in 0..100 {
        let n = 4 + (rng.next_u64() % 20) as usize;
        let m = 3 + (rng.next_u64() % n.min(10) as u64) as usize;
        let sys = common::generic_system(&mut rng, n, m);
        let s = sys.spectral();
        for eps in [1e-1, 1e-3, 1e-6] {
            let lo = t_lower_bound(s, eps).unwrap();
            let hi = t_upper_bound(s, eps).unwrap();
            let est = iteration_estimate(s, eps).unwrap();
            assert!(lo <= est && est <= hi, "{lo} <= {est} <= {hi}");
            let count = iteration_count(s, eps).unwrap() as f64;
            assert!(lo <= count && count <= hi, "{lo} <= {count} <= {hi}");
        }
    }
}

#[test]
fn rounding_up_can_cross_the_upper_bound_at_rank_two() {
    // σ = (1, 0.95): ‖A‖_F²/σ_min² = 2.108 sits just below rκ² = 2.216.
    let a = RealMatrix::diag(&[1.0, 0.95]);
    let sys = LinearSystem::new(a, RealVector::from(vec![0.1, 0.1])).unwrap();
    let s = sys.spectral();
    let eps = 0.1;
    let est = iteration_estimate(s, eps).unwrap();
    let hi = t_upper_bound(s, eps).unwrap();
    let count = iteration_count(s, eps).unwrap() as f64;
    assert!(est <= hi);
    assert!(count > hi, "{count} vs {hi}");
}
