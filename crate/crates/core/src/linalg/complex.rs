use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use super::{svd, LinalgError, RealMatrix};

/// A dense square complex matrix, row-major. Carrier for unitaries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if data.len() != dim * dim {
            return Err(LinalgError::DimensionMismatch {
                op: "ComplexMatrix::new",
                expected: dim * dim,
                found: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite { what: "complex matrix", index: i });
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Lifts a square real matrix.
    pub fn from_real(m: &RealMatrix) -> Result<Self, LinalgError> {
        if m.rows() != m.cols() {
            return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        Ok(Self {
            dim: m.rows(),
            data: m.as_slice().iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.dim != rhs.dim {
            return Err(LinalgError::DimensionMismatch {
                op: "complex matmul",
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, r) in orow.iter_mut().zip(rrow) {
                    *o += a * r;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (p, q) = (self.dim, rhs.dim);
        let n = p * q;
        let mut out = Self::zeros(n);
        for i in 0..p {
            for j in 0..p {
                let a = self[(i, j)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for k in 0..q {
                    for l in 0..q {
                        out[(i * q + k, j * q + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scaled_real(&self, s: f64) -> Self {
        self.scaled(Complex64::new(s, 0.0))
    }

    /// `a * self + b * other`
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self, LinalgError> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                op: "complex combine",
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(x, y)| x * a + y * b).collect(),
        })
    }

    /// Leading `d × d` block.
    pub fn top_left(&self, d: usize) -> Self {
        let mut out = Self::zeros(d);
        for i in 0..d {
            out.data[i * d..(i + 1) * d].copy_from_slice(&self.data[i * self.dim..i * self.dim + d]);
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// Block-diagonal extension `diag(self, I)` up to dimension `dim`.
    pub fn embed_with_identity(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        let mut out = Self::identity(dim);
        for i in 0..self.dim {
            out.data[i * dim..i * dim + self.dim]
                .copy_from_slice(&self.data[i * self.dim..(i + 1) * self.dim]);
        }
        out
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// `‖U†U − I‖_max`. Cubic in the dimension.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.data[k * n + i].conj() * self.data[k * n + j];
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// The real representation `[[Re, −Im], [Im, Re]]` of size `2n × 2n`.
    ///
    /// It is a *-homomorphism, so singular values (each doubled) and matrix
    /// functions can be computed on the real side.
    pub fn real_embedding(&self) -> RealMatrix {
        let n = self.dim;
        let mut r = RealMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                r[(i, j)] = z.re;
                r[(i, j + n)] = -z.im;
                r[(i + n, j)] = z.im;
                r[(i + n, j + n)] = z.re;
            }
        }
        r
    }

    /// Inverse of [`ComplexMatrix::real_embedding`], reading the left block column.
    pub fn from_real_embedding(r: &RealMatrix) -> Self {
        let n = r.rows() / 2;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = Complex64::new(r[(i, j)], r[(i + n, j)]);
            }
        }
        out
    }

    /// Spectral norm (largest singular value).
    pub fn operator_norm(&self) -> Result<f64, LinalgError> {
        let s = svd::singular_values(&self.real_embedding())?;
        Ok(s.first().copied().unwrap_or(0.0))
    }

    /// True when every imaginary part is at most `tol` in magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}
