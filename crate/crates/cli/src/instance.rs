//! Seeded generation of test systems.

use qkacz_core::linalg::{orthonormalize, RealMatrix, RealVector};
use qkacz_core::rng::SplitMix64;
use qkacz_core::LinearSystem;

use crate::config::{InstanceKind, InstanceSpec};
use crate::error::CliError;
use crate::matrix_io::read_system;

/// Builds the system described by `spec`; deterministic in `seed`.
pub fn generate_instance(spec: &InstanceSpec, seed: u64) -> Result<LinearSystem, CliError> {
    let mut rng = SplitMix64::new(seed);
    let sys = match spec.kind {
        InstanceKind::File => {
            let path = spec.path.as_deref().ok_or_else(|| CliError::Config("instance.path missing".into()))?;
            read_system(path)?
        }
        InstanceKind::Gaussian => {
            let a = gaussian(&mut rng, spec.n, spec.m, spec.row_sparsity);
            with_rhs(&mut rng, a, spec.consistent)?
        }
        InstanceKind::SynthesizedSpectrum => {
            let sigma = spectrum(spec);
            let a = synthesize(&mut rng, spec.n, spec.m, &sigma)?;
            with_rhs(&mut rng, a, spec.consistent)?
        }
    };
    if spec.normalize {
        sys.normalized().map_err(|e| CliError::numerical("normalizing instance", e))
    } else {
        Ok(sys)
    }
}

fn gaussian(rng: &mut SplitMix64, n: usize, m: usize, sparsity: Option<usize>) -> RealMatrix {
    let mut a = RealMatrix::zeros(n, m);
    let mut cols: Vec<usize> = (0..m).collect();
    for i in 0..n {
        let s = sparsity.unwrap_or(m);
        // Partial Fisher-Yates picks the row's support.
        for t in 0..s {
            let pick = t + (rng.next_u64() % (m - t) as u64) as usize;
            cols.swap(t, pick);
        }
        for &j in &cols[..s] {
            a[(i, j)] = rng.next_gaussian();
        }
    }
    a
}

/// Requested singular values: explicit, or geometric from 1 down to `1/κ`.
fn spectrum(spec: &InstanceSpec) -> Vec<f64> {
    if let Some(s) = &spec.singular_values {
        let mut s = s.clone();
        s.sort_by(|a, b| b.total_cmp(a));
        return s;
    }
    let r = spec.target_rank.unwrap_or(spec.n.min(spec.m));
    let kappa = spec.target_kappa.unwrap_or(1.0);
    if r == 1 {
        return vec![1.0];
    }
    (0..r).map(|i| kappa.powf(-(i as f64) / (r - 1) as f64)).collect()
}

/// `U diag(σ) Vᵀ` with random orthonormal `U` (n×r) and `V` (m×r).
fn synthesize(rng: &mut SplitMix64, n: usize, m: usize, sigma: &[f64]) -> Result<RealMatrix, CliError> {
    let r = sigma.len();
    let frame = |rng: &mut SplitMix64, dim: usize| -> Result<Vec<Vec<f64>>, CliError> {
        let cols: Vec<Vec<f64>> = (0..r).map(|_| (0..dim).map(|_| rng.next_gaussian()).collect()).collect();
        orthonormalize(&cols).map_err(|e| CliError::numerical("building singular vectors", e))
    };
    let u = frame(rng, n)?;
    let v = frame(rng, m)?;
    let mut a = RealMatrix::zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            a[(i, j)] = (0..r).map(|l| u[l][i] * sigma[l] * v[l][j]).sum();
        }
    }
    Ok(a)
}

fn with_rhs(rng: &mut SplitMix64, a: RealMatrix, consistent: bool) -> Result<LinearSystem, CliError> {
    let b = if consistent {
        let x: Vec<f64> = (0..a.cols()).map(|_| rng.next_gaussian()).collect();
        let x = RealVector::from(x);
        let x = x.scaled(0.5 / x.norm().max(f64::MIN_POSITIVE));
        a.matvec(&x).map_err(|e| CliError::numerical("building right-hand side", e))?
    } else {
        RealVector::from((0..a.rows()).map(|_| rng.next_gaussian()).collect::<Vec<_>>())
    };
    LinearSystem::new(a, b).map_err(|e| CliError::numerical("building instance", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Experiment, ExperimentConfig};

    fn spec() -> InstanceSpec {
        ExperimentConfig::defaults(Experiment::Converge).instance
    }

    #[test]
    fn synthesized_kappa() {
        let s = InstanceSpec {
            kind: InstanceKind::SynthesizedSpectrum,
            n: 6,
            m: 3,
            singular_values: Some(vec![1.0, 0.5]),
            normalize: false,
            ..spec()
        };
        let sys = generate_instance(&s, 9).unwrap();
        let sp = sys.spectral();
        assert_eq!(sp.rank, 2);
        assert!((sp.kappa.unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn synthesized_rank_one() {
        let s = InstanceSpec { kind: InstanceKind::SynthesizedSpectrum, n: 4, m: 4, target_rank: Some(1), ..spec() };
        assert_eq!(generate_instance(&s, 1).unwrap().spectral().rank, 1);
    }

    #[test]
    fn geometric_spectrum_hits_kappa() {
        let s = InstanceSpec {
            kind: InstanceKind::SynthesizedSpectrum,
            n: 12,
            m: 5,
            target_kappa: Some(30.0),
            ..spec()
        };
        let sys = generate_instance(&s, 4).unwrap();
        assert_eq!(sys.spectral().rank, 5);
        assert!((sys.spectral().kappa.unwrap() - 30.0).abs() < 1e-8 * 30.0);
    }

    #[test]
    fn gaussian_is_normalized_consistent_and_seeded() {
        let s = spec();
        let sys = generate_instance(&s, 3).unwrap();
        assert!(sys.spectral().sigma_max <= 1.0 + 1e-12 && sys.b().norm() <= 1.0 + 1e-12);
        sys.check_quantum_input().unwrap();
        let x = sys.least_squares_solution().unwrap();
        assert!(sys.residual_norm(&x).unwrap() < 1e-12);
        let again = generate_instance(&s, 3).unwrap();
        assert_eq!(sys.a().as_slice(), again.a().as_slice());
        assert_ne!(generate_instance(&s, 4).unwrap().a().as_slice(), sys.a().as_slice());
    }

    #[test]
    fn row_sparsity() {
        let s = InstanceSpec { n: 10, m: 8, row_sparsity: Some(3), ..spec() };
        let sys = generate_instance(&s, 5).unwrap();
        assert!((0..10).all(|j| sys.row_support(j) == 3));
    }
}
