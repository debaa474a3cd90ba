use num_complex::Complex64;

use super::matrix::{inner, ComplexMatrix};
use crate::error::{Error, Result};

/// Inverse of `A + u v^*` from `A^{-1}` by the Sherman-Morrison formula
/// `A^{-1} - (A^{-1} u v^* A^{-1}) / (1 + v^* A^{-1} u)`.
pub fn sherman_morrison_inverse(a_inv: &ComplexMatrix, u: &[Complex64], v: &[Complex64]) -> Result<ComplexMatrix> {
    let n = a_inv.rows();
    if !a_inv.is_square() || u.len() != n || v.len() != n {
        return Err(Error::Dimension(format!(
            "rank-one update of a {}x{} inverse with vectors of length {} and {}",
            a_inv.rows(),
            a_inv.cols(),
            u.len(),
            v.len()
        )));
    }
    let ainv_u = a_inv.matvec(u);
    // v^* A^{-1} as a row: (A^{-*} v)^*
    let vt_ainv: Vec<Complex64> = a_inv.adjoint_matvec(v).into_iter().map(|z| z.conj()).collect();
    let denom = Complex64::new(1.0, 0.0) + inner(v, &ainv_u);
    if denom.norm() <= 1e-12 {
        return Err(Error::SingularUpdate(denom.norm()));
    }
    let mut out = a_inv.clone();
    for i in 0..n {
        let left = ainv_u[i] / denom;
        if left.re == 0.0 && left.im == 0.0 {
            continue;
        }
        for j in 0..n {
            out[(i, j)] -= left * vt_ainv[j];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_update_is_identity_map() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64 + 2.0 * j as f64, 1.0));
        let zero = vec![c(0.0, 0.0); 3];
        let v = vec![c(1.0, 2.0); 3];
        assert_eq!(sherman_morrison_inverse(&a, &zero, &v).unwrap(), a);
    }

    #[test]
    fn identity_plus_e1_e1() {
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let got = sherman_morrison_inverse(&ComplexMatrix::identity(3), &e1, &e1).unwrap();
        let mut expected = ComplexMatrix::identity(3);
        expected[(0, 0)] = c(0.5, 0.0);
        assert!((&got - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn singular_update_rejected() {
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let minus_e1 = vec![c(-1.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(
            sherman_morrison_inverse(&ComplexMatrix::identity(2), &e1, &minus_e1),
            Err(Error::SingularUpdate(_))
        ));
    }
}
