use serde::{Deserialize, Serialize};

use super::{KaczmarzError, LinearSystem, RowSelector, SelectionStrategy};
use crate::linalg::RealVector;

/// When [`run_kaczmarz`] stops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StoppingRule {
    /// Exactly `T` iterations.
    FixedSteps(usize),
    /// Stop once `‖Ax − b‖₂ ≤ eps`, or after `max_steps`.
    ResidualBelow { eps: f64, max_steps: usize },
}

/// Iterates `x⁽⁰⁾..x⁽ᵀ⁾` of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterateTrace {
    pub iterates: Vec<RealVector>,
    pub selected_rows: Vec<usize>,
    /// `‖x⁽ᵏ⁾ − x_sol‖²`, empty unless a reference solution was supplied.
    pub errors_sq: Vec<f64>,
    /// `‖Ax⁽ᵏ⁾ − b‖₂`
    pub residual_norms: Vec<f64>,
    pub lambda: f64,
}

impl IterateTrace {
    pub fn steps(&self) -> usize {
        self.selected_rows.len()
    }

    pub fn last(&self) -> &RealVector {
        self.iterates.last().expect("trace always holds x0")
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<(), KaczmarzError> {
    if lambda > 0.0 && lambda <= 2.0 {
        Ok(())
    } else {
        Err(KaczmarzError::InvalidLambda(lambda))
    }
}

/// One relaxed projection `x + λ (b_j − a_jᵀx) / ‖a_j‖² · a_j`.
pub fn kaczmarz_step(x: &RealVector, sys: &LinearSystem, j: usize, lambda: f64) -> Result<RealVector, KaczmarzError> {
    check_lambda(lambda)?;
    if x.dim() != sys.cols() {
        return Err(KaczmarzError::DimensionMismatch { expected: sys.cols(), found: x.dim() });
    }
    if j >= sys.rows() {
        return Err(KaczmarzError::RowOutOfRange { row: j, rows: sys.rows() });
    }
    let norm_sq = sys.row_norm(j).powi(2);
    if norm_sq == 0.0 {
        return Err(KaczmarzError::DegenerateRow { row: j });
    }
    let row = sys.row(j);
    let ax: f64 = row.iter().zip(x.iter()).map(|(a, v)| a * v).sum();
    let coeff = lambda * (sys.b()[j] - ax) / norm_sq;
    Ok(x.iter().zip(row).map(|(v, a)| v + coeff * a).collect::<Vec<_>>().into())
}

/// Runs the Kaczmarz iteration from `x0`.
///
/// `solution` populates `errors_sq`; pass the least-squares solution for the
/// convergence studies.
pub fn run_kaczmarz(
    sys: &LinearSystem,
    strategy: SelectionStrategy,
    lambda: f64,
    stop: StoppingRule,
    x0: &RealVector,
    solution: Option<&RealVector>,
) -> Result<IterateTrace, KaczmarzError> {
    check_lambda(lambda)?;
    if x0.dim() != sys.cols() {
        return Err(KaczmarzError::DimensionMismatch { expected: sys.cols(), found: x0.dim() });
    }
    let (max_steps, eps) = match stop {
        StoppingRule::FixedSteps(t) => (t, None),
        StoppingRule::ResidualBelow { eps, max_steps } => (max_steps, Some(eps)),
    };
    let selector = RowSelector::new(strategy, sys)?;

    let mut trace = IterateTrace {
        iterates: Vec::with_capacity(max_steps + 1),
        selected_rows: Vec::with_capacity(max_steps),
        errors_sq: Vec::new(),
        residual_norms: Vec::with_capacity(max_steps + 1),
        lambda,
    };
    let record = |trace: &mut IterateTrace, x: RealVector| -> Result<f64, KaczmarzError> {
        let r = sys.residual_norm(&x)?;
        trace.residual_norms.push(r);
        if let Some(sol) = solution {
            trace.errors_sq.push(x.dist_sq(sol));
        }
        trace.iterates.push(x);
        Ok(r)
    };

    let mut residual = record(&mut trace, x0.clone())?;
    for k in 0..max_steps {
        if eps.is_some_and(|e| residual <= e) {
            break;
        }
        let j = selector.select(k as u64);
        let next = kaczmarz_step(trace.last(), sys, j, lambda)
            .map_err(|e| KaczmarzError::AtIteration { k, source: Box::new(e) })?;
        trace.selected_rows.push(j);
        residual = record(&mut trace, next)?;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;

    fn orthogonal_system() -> LinearSystem {
        let a = RealMatrix::from_rows(&[vec![0.6, 0.8], vec![0.8, -0.6]]).unwrap();
        LinearSystem::new(a, vec![0.5, 0.1].into()).unwrap()
    }

    #[test]
    fn hand_projection() {
        let sys = orthogonal_system();
        let x = kaczmarz_step(&RealVector::zeros(2), &sys, 0, 1.0).unwrap();
        assert!(x.dist_inf(&vec![0.30, 0.40].into()) < 1e-15);
    }

    #[test]
    fn fixed_point_on_hyperplane() {
        let sys = orthogonal_system();
        let x: RealVector = vec![0.3, 0.4].into();
        assert!(kaczmarz_step(&x, &sys, 0, 1.0).unwrap().dist_inf(&x) < 1e-16);
    }

    #[test]
    fn orthogonal_rows_converge_in_one_sweep() {
        let sys = orthogonal_system();
        let sol = sys.least_squares_solution().unwrap();
        let tr = run_kaczmarz(&sys, SelectionStrategy::cyclic(), 1.0, StoppingRule::FixedSteps(2), &RealVector::zeros(2), Some(&sol))
            .unwrap();
        assert!(tr.last().dist_inf(&vec![0.38, 0.34].into()) < 1e-12);
        assert!(tr.errors_sq[2] < 1e-24);
        assert_eq!(tr.selected_rows, vec![0, 1]);
    }

    #[test]
    fn empty_run() {
        let sys = orthogonal_system();
        let x0: RealVector = vec![0.1, 0.2].into();
        let tr = run_kaczmarz(&sys, SelectionStrategy::cyclic(), 1.0, StoppingRule::FixedSteps(0), &x0, None).unwrap();
        assert_eq!(tr.iterates, vec![x0]);
        assert!(tr.selected_rows.is_empty());
        assert!(tr.errors_sq.is_empty());
    }

    #[test]
    fn identity_fixes_one_coordinate_per_step() {
        let sys = LinearSystem::new(RealMatrix::identity(2), vec![0.6, 0.8].into()).unwrap();
        let tr = run_kaczmarz(&sys, SelectionStrategy::cyclic(), 1.0, StoppingRule::FixedSteps(2), &RealVector::zeros(2), None)
            .unwrap();
        assert_eq!(tr.iterates[1].as_slice(), &[0.6, 0.0]);
        assert_eq!(tr.last().as_slice(), &[0.6, 0.8]);
    }

    #[test]
    fn residual_stopping() {
        let sys = LinearSystem::new(RealMatrix::identity(2), vec![0.6, 0.8].into()).unwrap();
        let stop = StoppingRule::ResidualBelow { eps: 1e-12, max_steps: 100 };
        let tr = run_kaczmarz(&sys, SelectionStrategy::cyclic(), 1.0, stop, &RealVector::zeros(2), None).unwrap();
        assert_eq!(tr.steps(), 2);
    }

    #[test]
    fn degenerate_row_reports_iteration() {
        let a = RealMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let sys = LinearSystem::new(a, vec![1.0, 0.0].into()).unwrap();
        assert!(matches!(kaczmarz_step(&RealVector::zeros(2), &sys, 1, 1.0), Err(KaczmarzError::DegenerateRow { row: 1 })));
        let err = run_kaczmarz(&sys, SelectionStrategy::cyclic(), 1.0, StoppingRule::FixedSteps(3), &RealVector::zeros(2), None)
            .unwrap_err();
        assert!(matches!(err, KaczmarzError::AtIteration { k: 1, .. }));
    }

    #[test]
    fn lambda_range() {
        let sys = orthogonal_system();
        let x = RealVector::zeros(2);
        assert!(kaczmarz_step(&x, &sys, 0, 0.0).is_err());
        assert!(kaczmarz_step(&x, &sys, 0, 2.5).is_err());
        assert!(kaczmarz_step(&x, &sys, 0, 2.0).is_ok());
    }
}
