//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! One-sided Jacobi orthogonalizes the columns of `A V` pairwise; the
//! resulting column norms are the singular values and carry high relative
//! accuracy, which the determinant and Weyl checks lean on.

use num_complex::Complex64;

use super::lanczos::top_eigenvalue;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U diag(s) V^*` with `s` sorted in decreasing order.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Left singular vectors as columns (`rows x cols`); columns belonging to
    /// zero singular values are zero.
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    /// Right singular vectors as columns (`cols x cols`).
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let (rows, cols) = (a.rows(), a.cols());
    if rows < cols {
        return Err(Error::Dimension(format!(
            "one-sided Jacobi SVD needs rows >= cols, got {rows}x{cols}"
        )));
    }
    // column-major working copies
    let mut w: Vec<Vec<Complex64>> = (0..cols).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); cols];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let mut norms: Vec<f64> = w.iter().map(|c| sq_norm(c)).collect();
    let tol = f64::EPSILON * (rows as f64).sqrt();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta) = (norms[p], norms[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: Complex64 = w[p].iter().zip(&w[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let e = phase.conj();
                rotate(&mut w, p, q, c, s, e);
                rotate(&mut v, p, q, c, s, e);
                norms[p] = sq_norm(&w[p]);
                norms[q] = sq_norm(&w[q]);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let sv: Vec<f64> = norms.iter().map(|x| x.sqrt()).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    let mut u = ComplexMatrix::zeros(rows, cols);
    let mut vm = ComplexMatrix::zeros(cols, cols);
    let mut singular_values = Vec::with_capacity(cols);
    for (k, &j) in order.iter().enumerate() {
        let s = sv[j];
        singular_values.push(s);
        if s > 0.0 {
            for i in 0..rows {
                u[(i, k)] = w[j][i] / s;
            }
        }
        for i in 0..cols {
            vm[(i, k)] = v[j][i];
        }
    }
    Ok(Svd {
        u,
        singular_values,
        v: vm,
    })
}

fn sq_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

// [x_p, x_q] <- [x_p, e x_q] [[c, s], [-s, c]]
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, e: Complex64) {
    let (left, right) = cols.split_at_mut(q);
    let (xp, xq) = (&mut left[p], &mut right[0]);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let eb = e * *b;
        let na = *a * c - eb * s;
        let nb = *a * s + eb * c;
        *a = na;
        *b = nb;
    }
}

/// Singular values of a square matrix, decreasing.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Dimension("singular_values expects a square matrix".into()));
    }
    Ok(svd(m)?.singular_values)
}

/// Spectral norm (largest singular value).
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.rows() >= m.cols() {
        svd(m).map(|s| s.singular_values[0]).unwrap_or(0.0)
    } else {
        svd(&m.adjoint()).map(|s| s.singular_values[0]).unwrap_or(0.0)
    }
}

/// Spectral norm from matrix-free Lanczos on `M^* M`; cheaper than a full SVD
/// on large dense matrices.
pub fn operator_norm_estimate(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    top_eigenvalue(m.cols(), |x| m.adjoint_matvec(&m.matvec(x)))
        .max(0.0)
        .sqrt()
}

/// Factor `A ~ B C` with `B = U_k sqrt(S_k)`, `C = sqrt(S_k) V_k^*`, keeping
/// singular values above `tol`.
pub fn low_rank_factor(a: &ComplexMatrix, tol: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::Dimension("low_rank_factor expects a square matrix".into()));
    }
    let n = a.rows();
    let dec = svd(a)?;
    let k = dec.singular_values.iter().take_while(|&&s| s > tol).count();
    let mut b = ComplexMatrix::zeros(n, k);
    let mut c = ComplexMatrix::zeros(k, n);
    for j in 0..k {
        let r = dec.singular_values[j].sqrt();
        for i in 0..n {
            b[(i, j)] = dec.u[(i, j)] * r;
            c[(j, i)] = dec.v[(i, j)].conj() * r;
        }
    }
    Ok((b, c))
}

/// Numerical rank: number of singular values above `tol`.
pub fn rank(a: &ComplexMatrix, tol: f64) -> Result<usize> {
    let s = if a.rows() >= a.cols() {
        svd(a)?
    } else {
        svd(&a.adjoint())?
    };
    Ok(s.singular_values.iter().filter(|&&x| x > tol).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_singular_values() {
        let d = ComplexMatrix::from_diag(&[c(2.0, 0.0), c(-1.0, 0.0)]);
        let s = singular_values(&d).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-15 && (s[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&ComplexMatrix::identity(6)) - 1.0).abs() < 1e-14);
        let d = ComplexMatrix::from_diag(&[c(3.0, 0.0), c(1.0, 0.0)]);
        assert!((operator_norm(&d) - 3.0).abs() < 1e-14);
        assert!((operator_norm_estimate(&d) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction() {
        let a = ComplexMatrix::from_fn(5, 5, |i, j| {
            c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + j) % 3) as f64 - 1.0)
        });
        let dec = svd(&a).unwrap();
        let s = ComplexMatrix::from_diag(&dec.singular_values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
        let back = dec.u.matmul(&s).matmul(&dec.v.adjoint());
        assert!((&back - &a).max_abs() < 1e-12);
        for w in dec.singular_values.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn low_rank_factor_examples() {
        let (b, cm) = low_rank_factor(&ComplexMatrix::zeros(3, 3), 1e-12).unwrap();
        assert_eq!((b.cols(), cm.rows()), (0, 0));

        let a = ComplexMatrix::padded_diag(&[c(2.0, 0.0)], 3).unwrap();
        let (b, cm) = low_rank_factor(&a, 1e-12).unwrap();
        assert_eq!(b.cols(), 1);
        assert!((&b.matmul(&cm) - &a).max_abs() < 1e-10);
    }
}
