use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{determinant, operator_norm_estimate, ComplexMatrix, Lu};

/// `det(I_k + C (Y - zI)^{-1} B)`. It vanishes exactly when `z` is an
/// eigenvalue of `Y + BC` that is not an eigenvalue of `Y`, and equals
/// `det(Y + BC - zI) / det(Y - zI)`.
pub fn criterion_function(y: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, z: Complex64) -> Result<Complex64> {
    let n = y.rows();
    let k = b.cols();
    if !y.is_square() || b.rows() != n || c.rows() != k || c.cols() != n {
        return Err(Error::Dimension(format!(
            "criterion needs Y n x n, B n x k, C k x n; got {}x{}, {}x{}, {}x{}",
            y.rows(),
            y.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    if k == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let lu = Lu::factor(&y.shift_diagonal(z))?;
    let s_min = lu.smallest_singular_value();
    if !(s_min > 1e-12 * (1.0 + operator_norm_estimate(y))) {
        return Err(Error::NearSingularShift { z, s_min });
    }
    let w = lu.solve_matrix(b)?;
    determinant(&(&ComplexMatrix::identity(k) + &c.matmul(&w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_factors_give_one() {
        let y = ComplexMatrix::identity(3);
        let v = criterion_function(
            &y,
            &ComplexMatrix::zeros(3, 0),
            &ComplexMatrix::zeros(0, 3),
            c(5.0, 0.0),
        );
        assert_eq!(v.unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn hand_example_vanishes_at_eigenvalue() {
        let y = ComplexMatrix::zeros(2, 2);
        let b = ComplexMatrix::column_vector(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let cm = ComplexMatrix::row_vector(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let v = criterion_function(&y, &b, &cm, c(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn rejects_shift_on_spectrum() {
        let y = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let b = ComplexMatrix::column_vector(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let cm = ComplexMatrix::row_vector(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(criterion_function(&y, &b, &cm, c(2.0, 0.0)).is_err());
    }
}
