use serde::{Deserialize, Serialize};

use super::{KaczmarzError, LinearSystem};
use crate::rng::{nth_u64, unit_f64};

/// How the row `j_k` is chosen at iteration `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionKind {
    Cyclic,
    UniformRandom,
    /// `P(j) = ‖a_j‖² / ‖A‖_F²`
    NormWeighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionStrategy {
    pub kind: SelectionKind,
    /// Ignored by [`SelectionKind::Cyclic`].
    pub seed: u64,
}

impl SelectionStrategy {
    pub fn cyclic() -> Self {
        Self { kind: SelectionKind::Cyclic, seed: 0 }
    }

    pub fn uniform(seed: u64) -> Self {
        Self { kind: SelectionKind::UniformRandom, seed }
    }

    pub fn norm_weighted(seed: u64) -> Self {
        Self { kind: SelectionKind::NormWeighted, seed }
    }
}

/// A strategy bound to one system. Draw `k` depends only on `(seed, k)`.
#[derive(Debug, Clone)]
pub struct RowSelector {
    strategy: SelectionStrategy,
    n: usize,
    cumulative: Vec<f64>,
    last_nonzero: usize,
}

impl RowSelector {
    pub fn new(strategy: SelectionStrategy, sys: &LinearSystem) -> Result<Self, KaczmarzError> {
        let n = sys.rows();
        let last_nonzero = (0..n).rev().find(|&j| sys.row_norm(j) > 0.0).ok_or(KaczmarzError::ZeroMatrix)?;
        let cumulative = if strategy.kind == SelectionKind::NormWeighted {
            let probs = norm_weighted_probabilities(sys);
            let mut acc = 0.0;
            let mut cum: Vec<f64> = probs
                .iter()
                .map(|p| {
                    acc += p;
                    acc
                })
                .collect();
            for c in cum.iter_mut().skip(last_nonzero) {
                *c = 1.0;
            }
            cum
        } else {
            Vec::new()
        };
        Ok(Self { strategy, n, cumulative, last_nonzero })
    }

    pub fn strategy(&self) -> SelectionStrategy {
        self.strategy
    }

    pub fn select(&self, k: u64) -> usize {
        match self.strategy.kind {
            SelectionKind::Cyclic => (k % self.n as u64) as usize,
            SelectionKind::UniformRandom => {
                let u = unit_f64(nth_u64(self.strategy.seed, k));
                ((u * self.n as f64) as usize).min(self.n - 1)
            }
            SelectionKind::NormWeighted => {
                let u = unit_f64(nth_u64(self.strategy.seed, k));
                self.cumulative.partition_point(|&c| c <= u).min(self.last_nonzero)
            }
        }
    }
}

/// `p_j = ‖a_j‖² / ‖A‖_F²`
pub fn norm_weighted_probabilities(sys: &LinearSystem) -> Vec<f64> {
    let total = sys.row_norm_sq_sum();
    sys.row_norms().iter().map(|r| r * r / total).collect()
}

/// Row index for iteration `k`.
pub fn select_row(strategy: SelectionStrategy, sys: &LinearSystem, k: u64) -> Result<usize, KaczmarzError> {
    Ok(RowSelector::new(strategy, sys)?.select(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;

    fn sys(rows: &[Vec<f64>]) -> LinearSystem {
        let a = RealMatrix::from_rows(rows).unwrap();
        let n = a.rows();
        LinearSystem::new(a, vec![0.0; n].into()).unwrap()
    }

    #[test]
    fn cyclic_is_modular() {
        let s = sys(&[vec![1.0], vec![1.0], vec![1.0]]);
        assert_eq!(select_row(SelectionStrategy::cyclic(), &s, 7).unwrap(), 1);
    }

    #[test]
    fn weighted_probabilities() {
        // row norms² = (1, 3)
        let s = sys(&[vec![1.0, 0.0], vec![1.0, 2f64.sqrt()]]);
        let p = norm_weighted_probabilities(&s);
        assert!((p[0] - 0.25).abs() < 1e-15);
        assert!((p[1] - 0.75).abs() < 1e-15);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);

        let sel = RowSelector::new(SelectionStrategy::norm_weighted(99), &s).unwrap();
        let draws = 100_000;
        let ones = (0..draws).filter(|&k| sel.select(k) == 1).count() as f64 / draws as f64;
        assert!((ones - 0.75).abs() < 3.0 * (0.75f64 * 0.25 / draws as f64).sqrt() + 1e-3);
    }

    #[test]
    fn single_row_always_zero() {
        let s = sys(&[vec![0.3, 0.4]]);
        for kind in [SelectionStrategy::cyclic(), SelectionStrategy::uniform(5), SelectionStrategy::norm_weighted(5)] {
            let sel = RowSelector::new(kind, &s).unwrap();
            assert!((0..50).all(|k| sel.select(k) == 0));
        }
    }

    #[test]
    fn zero_rows_never_weighted() {
        let s = sys(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0]]);
        let sel = RowSelector::new(SelectionStrategy::norm_weighted(1), &s).unwrap();
        assert!((0..1000).all(|k| sel.select(k) == 1));
    }

    #[test]
    fn all_zero_matrix_errors() {
        let s = sys(&[vec![0.0, 0.0]]);
        assert!(matches!(
            select_row(SelectionStrategy::cyclic(), &s, 0),
            Err(KaczmarzError::ZeroMatrix)
        ));
    }

    #[test]
    fn reproducible_from_seed() {
        let s = sys(&[vec![1.0], vec![2.0], vec![3.0]]);
        let a = RowSelector::new(SelectionStrategy::norm_weighted(42), &s).unwrap();
        let b = RowSelector::new(SelectionStrategy::norm_weighted(42), &s).unwrap();
        let c = RowSelector::new(SelectionStrategy::norm_weighted(43), &s).unwrap();
        let ra: Vec<_> = (0..64).map(|k| a.select(k)).collect();
        let rb: Vec<_> = (0..64).map(|k| b.select(k)).collect();
        let rc: Vec<_> = (0..64).map(|k| c.select(k)).collect();
        assert_eq!(ra, rb);
        assert_ne!(ra, rc);
    }
}
