#![allow(dead_code)]

use num_complex::Complex64;
use qkacz_core::linalg::{orthonormalize, ComplexMatrix, RealMatrix, RealVector};
use qkacz_core::rng::SplitMix64;
use qkacz_core::LinearSystem;

pub fn gaussian_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> RealMatrix {
    let data = (0..rows * cols).map(|_| rng.next_gaussian()).collect();
    RealMatrix::new(rows, cols, data).unwrap()
}

pub fn gaussian_vector(rng: &mut SplitMix64, n: usize) -> RealVector {
    RealVector::from((0..n).map(|_| rng.next_gaussian()).collect::<Vec<_>>())
}

pub fn complex_gaussian(rng: &mut SplitMix64, dim: usize) -> ComplexMatrix {
    let data = (0..dim * dim).map(|_| Complex64::new(rng.next_gaussian(), rng.next_gaussian())).collect();
    ComplexMatrix::new(dim, data).unwrap()
}

/// Random complex matrix with operator norm `norm`.
pub fn contraction(rng: &mut SplitMix64, dim: usize, norm: f64) -> ComplexMatrix {
    let m = complex_gaussian(rng, dim);
    let s = m.operator_norm().unwrap();
    m.scaled_real(norm / s)
}

/// Random real orthogonal matrix of size `n`.
pub fn orthogonal(rng: &mut SplitMix64, n: usize) -> RealMatrix {
    let cols: Vec<Vec<f64>> = (0..n).map(|_| gaussian_vector(rng, n).into_vec()).collect();
    RealMatrix::from_columns(&orthonormalize(&cols).unwrap())
}

/// Random complex unitary of even size: the dilation of a random contraction.
pub fn unitary(rng: &mut SplitMix64, dim: usize) -> ComplexMatrix {
    assert!(dim.is_multiple_of(2));
    let m = contraction(rng, dim / 2, 0.9);
    qkacz_core::blockenc::dilate(&m).unwrap().unitary().clone()
}

/// `n × m` Gaussian system with `‖A‖ ≤ 1`, `‖b‖ ≤ 1`, and `b` in the range of `A`.
pub fn consistent_system(rng: &mut SplitMix64, n: usize, m: usize) -> LinearSystem {
    let a = gaussian_matrix(rng, n, m);
    let x = gaussian_vector(rng, m);
    let b = a.matvec(&x).unwrap();
    LinearSystem::new(a, b).unwrap().normalized().unwrap()
}

/// `n × m` Gaussian system with a generic (inconsistent) right-hand side.
pub fn generic_system(rng: &mut SplitMix64, n: usize, m: usize) -> LinearSystem {
    let a = gaussian_matrix(rng, n, m);
    let b = gaussian_vector(rng, n);
    LinearSystem::new(a, b).unwrap().normalized().unwrap()
}
