//! One-sided (Hestenes) Jacobi SVD.
//!
//! Columns of a working copy are rotated pairwise until mutually orthogonal;
//! the column norms are then the singular values. Accurate to working
//! precision and adequate up to a few hundred columns.

use super::matrix::dot;
use super::{LinalgError, RealMatrix, RealVector};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `M = U·diag(S)·Vᵀ` with `k = min(rows, cols)` singular triplets.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows × k`, orthonormal columns.
    pub u: RealMatrix,
    /// Descending, non-negative.
    pub s: RealVector,
    /// `cols × k`, orthonormal columns.
    pub v: RealMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> RealMatrix {
        let (n, m, k) = (self.u.rows(), self.v.rows(), self.s.dim());
        let mut out = RealMatrix::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                out[(i, j)] = (0..k).map(|l| self.u[(i, l)] * self.s[l] * self.v[(j, l)]).sum();
            }
        }
        out
    }
}

pub fn svd(m: &RealMatrix) -> Result<Svd, LinalgError> {
    if m.rows() >= m.cols() {
        let (u, s, v) = jacobi_tall(m)?;
        Ok(Svd { u, s, v })
    } else {
        let (u, s, v) = jacobi_tall(&m.transpose())?;
        Ok(Svd { u: v, s, v: u })
    }
}

pub fn singular_values(m: &RealMatrix) -> Result<Vec<f64>, LinalgError> {
    Ok(svd(m)?.s.into_vec())
}

fn jacobi_tall(a: &RealMatrix) -> Result<(RealMatrix, RealVector, RealMatrix), LinalgError> {
    let (n, m) = (a.rows(), a.cols());
    let mut w: Vec<Vec<f64>> = (0..m).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..m).map(|j| RealVector::basis(m, j).into_vec()).collect();
    let tol = f64::EPSILON * (n as f64).sqrt().max(1.0);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m {
            for q in (p + 1)..m {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { rows: n, cols: m, sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = w.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let smax = norms[order[0]];
    let null_tol = smax * f64::EPSILON * (n.max(m) as f64);
    let mut u_cols: Vec<Option<Vec<f64>>> = Vec::with_capacity(m);
    let mut s = Vec::with_capacity(m);
    let mut v_cols = Vec::with_capacity(m);
    for &j in &order {
        let sigma = norms[j];
        s.push(sigma);
        v_cols.push(v[j].clone());
        if sigma > null_tol && sigma > 0.0 {
            u_cols.push(Some(w[j].iter().map(|x| x / sigma).collect()));
        } else {
            u_cols.push(None);
        }
    }
    let u_cols = complete_orthonormal(n, u_cols);
    Ok((RealMatrix::from_columns(&u_cols), RealVector::from(s), RealMatrix::from_columns(&v_cols)))
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Fills the `None` slots with unit vectors orthogonal to every other column.
fn complete_orthonormal(n: usize, cols: Vec<Option<Vec<f64>>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = cols.iter().flatten().cloned().collect();
    let mut next_candidate = 0;
    let mut out = Vec::with_capacity(cols.len());
    for col in cols {
        match col {
            Some(c) => out.push(c),
            None => loop {
                assert!(next_candidate < n, "orthonormal completion ran out of candidates");
                let mut cand = RealVector::basis(n, next_candidate).into_vec();
                next_candidate += 1;
                for _ in 0..2 {
                    for b in &basis {
                        let proj = dot(&cand, b);
                        cand.iter_mut().zip(b).for_each(|(x, y)| *x -= proj * y);
                    }
                }
                let norm = dot(&cand, &cand).sqrt();
                if norm > 1e-3 {
                    cand.iter_mut().for_each(|x| *x /= norm);
                    basis.push(cand.clone());
                    out.push(cand);
                    break;
                }
            },
        }
    }
    out
}

/// Orthonormalizes the columns of `cols` by modified Gram-Schmidt with one
/// reorthogonalization pass. Fails if the columns are numerically dependent.
pub fn orthonormalize(cols: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, LinalgError> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for (j, col) in cols.iter().enumerate() {
        let mut c = col.clone();
        let start = dot(&c, &c).sqrt();
        for _ in 0..2 {
            for b in &out {
                let proj = dot(&c, b);
                c.iter_mut().zip(b).for_each(|(x, y)| *x -= proj * y);
            }
        }
        let norm = dot(&c, &c).sqrt();
        if norm <= 1e-10 * start.max(f64::MIN_POSITIVE) {
            return Err(LinalgError::RankDeficientBasis { column: j });
        }
        c.iter_mut().for_each(|x| *x /= norm);
        out.push(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn orthonormality_defect(m: &RealMatrix) -> f64 {
        let g = m.transpose().matmul(m).unwrap();
        g.max_abs_diff(&RealMatrix::identity(m.cols()))
    }

    #[test]
    fn identity_values() {
        let s = svd(&RealMatrix::identity(3)).unwrap();
        assert_eq!(s.s.as_slice(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_values_sorted() {
        let s = svd(&RealMatrix::diag(&[0.25, 0.5])).unwrap();
        assert!((s.s[0] - 0.5).abs() < 1e-15);
        assert!((s.s[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_matrix_has_unit_values() {
        let q = RealMatrix::from_rows(&[vec![0.6, 0.8], vec![0.8, -0.6]]).unwrap();
        // QᵀQ = I by direct multiplication
        assert!(q.transpose().matmul(&q).unwrap().max_abs_diff(&RealMatrix::identity(2)) < 1e-15);
        let s = svd(&q).unwrap();
        for v in s.s.iter() {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rank_deficient_completion() {
        let m = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![0.0, 0.0]]).unwrap();
        let s = svd(&m).unwrap();
        assert!(s.s[1].abs() < 1e-14);
        assert!(orthonormality_defect(&s.u) < 1e-14);
        assert!(orthonormality_defect(&s.v) < 1e-14);
        assert!(s.reconstruct().frobenius_distance(&m) < 1e-13);
    }

    #[test]
    fn zero_matrix() {
        let s = svd(&RealMatrix::zeros(2, 3)).unwrap();
        assert_eq!(s.s.as_slice(), &[0.0, 0.0]);
        assert!(orthonormality_defect(&s.u) < 1e-15);
    }

    #[test]
    fn wide_and_tall_random() {
        let mut rng = SplitMix64::new(3);
        for &(n, m) in &[(7, 3), (3, 7), (12, 12), (1, 5), (5, 1)] {
            let data = (0..n * m).map(|_| rng.next_gaussian()).collect();
            let a = RealMatrix::new(n, m, data).unwrap();
            let s = svd(&a).unwrap();
            assert_eq!(s.s.dim(), n.min(m));
            assert!(s.reconstruct().frobenius_distance(&a) <= 1e-12 * a.frobenius());
            assert!(orthonormality_defect(&s.u) < 1e-12);
            assert!(orthonormality_defect(&s.v) < 1e-12);
            assert!(s.s.as_slice().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn gram_schmidt_rejects_dependent_columns() {
        assert!(orthonormalize(&[vec![1.0, 0.0], vec![2.0, 0.0]]).is_err());
        let q = orthonormalize(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(dot(&q[0], &q[1]).abs() < 1e-15);
    }
}
