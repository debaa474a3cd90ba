use num_complex::Complex64;

use super::lanczos::top_eigenvalue;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// LU factorization with partial (row) pivoting, `P M = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl Lu {
    pub fn factor(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                let s = lu.as_mut_slice();
                for j in 0..n {
                    s.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            let s = lu.as_mut_slice();
            let (upper, lower) = s.split_at_mut((k + 1) * n);
            let pivot_row = &upper[k * n..(k + 1) * n];
            for row in lower.chunks_exact_mut(n) {
                let f = row[k] / pivot;
                row[k] = f;
                if f.re != 0.0 || f.im != 0.0 {
                    for j in k + 1..n {
                        row[j] -= f * pivot_row[j];
                    }
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            swaps,
            singular,
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Product of the pivots times the permutation sign.
    pub fn determinant(&self) -> Complex64 {
        if self.singular {
            return Complex64::new(0.0, 0.0);
        }
        let sign = if self.swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
        self.lu.diagonal().into_iter().product::<Complex64>() * sign
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Dimension(format!(
                "rhs of length {} for a {n}x{n} system",
                b.len()
            )));
        }
        if self.singular {
            return Err(Error::Singular);
        }
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in 0..i {
                acc -= row[j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= row[j] * x[j];
            }
            x[i] = acc / row[i];
        }
        Ok(x)
    }

    /// Solves `M^* x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Dimension(format!(
                "rhs of length {} for a {n}x{n} system",
                b.len()
            )));
        }
        if self.singular {
            return Err(Error::Singular);
        }
        // M^* = U^* L^* P, so solve U^* y = b, L^* w = y, x = P^T w.
        let mut y = b.to_vec();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = acc / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = acc;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        Ok(x)
    }

    pub fn solve_matrix(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if b.rows() != self.dim() {
            return Err(Error::Dimension(format!(
                "rhs with {} rows for a {}x{} system",
                b.rows(),
                self.dim(),
                self.dim()
            )));
        }
        let mut out = ComplexMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve(&b.column(j))?;
            for (i, xi) in x.into_iter().enumerate() {
                out[(i, j)] = xi;
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        self.solve_matrix(&ComplexMatrix::identity(self.dim()))
    }

    /// Estimate of the smallest singular value, `1 / ||M^{-1}||`, using
    /// matrix-free Lanczos on `M^{-*} M^{-1}`.
    pub fn smallest_singular_value(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        let top = top_eigenvalue(self.dim(), |x| {
            let y = self.solve(x).expect("nonsingular");
            self.solve_adjoint(&y).expect("nonsingular")
        });
        1.0 / top.sqrt()
    }
}

/// Determinant via LU with partial pivoting; zero for singular matrices.
pub fn determinant(m: &ComplexMatrix) -> Result<Complex64> {
    Ok(Lu::factor(m)?.determinant())
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Lu::factor(m)?.inverse()
}

pub fn solve(m: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    Lu::factor(m)?.solve(b)
}

/// `(M - zI)^{-1}`, refused when `s_min(M - zI) <= 1e-12 (1 + ||M||)`.
pub fn resolvent(m: &ComplexMatrix, z: Complex64) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension("resolvent needs a square matrix".into()));
    }
    let lu = Lu::factor(&m.shift_diagonal(z))?;
    let s_min = lu.smallest_singular_value();
    let norm = super::svd::operator_norm_estimate(m);
    if !(s_min > 1e-12 * (1.0 + norm)) {
        return Err(Error::NearSingularShift { z, s_min });
    }
    lu.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&ComplexMatrix::identity(5)).unwrap(), c(1.0, 0.0));
        let d = ComplexMatrix::from_diag(&[c(2.0, 0.0), c(3.0, 0.0)]);
        assert!((determinant(&d).unwrap() - c(6.0, 0.0)).norm() < 1e-15);
        let sing = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert_eq!(determinant(&sing).unwrap(), c(0.0, 0.0));
        // a single swap flips the sign
        let swap = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(determinant(&swap).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn resolvent_examples() {
        let r = resolvent(&ComplexMatrix::zeros(3, 3), c(2.0, 0.0)).unwrap();
        assert!((&r - &ComplexMatrix::identity(3).scale_real(-0.5)).max_abs() < 1e-15);
        let r = resolvent(&ComplexMatrix::from_diag(&[c(1.0, 0.0)]), c(3.0, 0.0)).unwrap();
        assert!((r[(0, 0)] - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn resolvent_rejects_eigenvalue_shift() {
        let m = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(matches!(
            resolvent(&m, c(2.0, 0.0)),
            Err(Error::NearSingularShift { .. })
        ));
    }

    #[test]
    fn adjoint_solve_agrees_with_explicit_adjoint() {
        let m = ComplexMatrix::from_fn(4, 4, |i, j| {
            c(
                (i + 2 * j) as f64 % 3.0 - 1.0,
                (i * j) as f64 * 0.3 + if i == j { 2.0 } else { 0.0 },
            )
        });
        let b: Vec<Complex64> = (0..4).map(|i| c(i as f64, 1.0 - i as f64)).collect();
        let x = Lu::factor(&m).unwrap().solve_adjoint(&b).unwrap();
        let back = m.adjoint().matvec(&x);
        for (p, q) in back.iter().zip(&b) {
            assert!((p - q).norm() < 1e-12);
        }
    }
}
