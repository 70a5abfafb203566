use crate::config::TOL;
use crate::error::{Error, Result};

use super::matrix::{Matrix, Scalar};

/// LU factorization with partial pivoting, `P A = L U`, stored packed.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    sign: f64,
    min_pivot: f64,
    max_entry: f64,
}

impl<T: Scalar> Lu<T> {
    pub fn new(m: &Matrix<T>) -> Self {
        assert!(m.is_square(), "LU requires a square matrix");
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            min_pivot = min_pivot.min(pmag);
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            if pmag == 0.0 {
                continue;
            }
            for i in (k + 1)..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == T::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        if n == 0 {
            min_pivot = 0.0;
        }
        Lu { lu, perm, sign, min_pivot, max_entry: m.max_abs() }
    }

    pub fn determinant(&self) -> T {
        let n = self.lu.rows();
        let mut det = T::from_f64(self.sign);
        for i in 0..n {
            det *= self.lu[(i, i)];
        }
        det
    }

    /// Fails when the smallest pivot is below `TOL.pivot` times the largest entry.
    pub fn check_nonsingular(&self) -> Result<()> {
        let threshold = TOL.pivot * self.max_entry;
        if !(self.min_pivot >= threshold) || self.max_entry == 0.0 {
            return Err(Error::SingularMatrix { pivot: self.min_pivot, threshold });
        }
        Ok(())
    }

    pub fn solve(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_nonsingular()?;
        let n = self.lu.rows();
        if rhs.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rhs.rows() });
        }
        let m = rhs.cols();
        let mut x = Matrix::from_fn(n, m, |i, j| rhs[(self.perm[i], j)]);
        for j in 0..m {
            for i in 0..n {
                let mut acc = x[(i, j)];
                for k in 0..i {
                    acc -= self.lu[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = x[(i, j)];
                for k in (i + 1)..n {
                    acc -= self.lu[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = acc / self.lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix<T>> {
        self.solve(&Matrix::identity(self.lu.rows()))
    }
}

/// Determinant by LU with partial pivoting; exactly zero for a zero pivot.
pub fn determinant<T: Scalar>(m: &Matrix<T>) -> T {
    Lu::new(m).determinant()
}

/// Solve `m x = rhs`.
pub fn solve<T: Scalar>(m: &Matrix<T>, rhs: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    Lu::new(m).solve(rhs)
}

pub fn inverse<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    Lu::new(m).inverse()
}
