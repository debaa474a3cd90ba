//! Shifted systems `(M - zI) x = b` for many shifts `z` sharing one matrix.
//!
//! `M` is reduced once to Hessenberg form `M = Q H Q^*`; each shift then costs
//! a Givens QR of `H - zI`, which is `O(N^2)` instead of `O(N^3)`.

use num_complex::Complex64;

use super::eigen::{givens, Hessenberg};
use super::lanczos::top_eigenvalue;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ShiftedSystem {
    hess: Hessenberg,
}

impl ShiftedSystem {
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        Ok(Self {
            hess: Hessenberg::reduce(m)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.hess.dim()
    }

    pub fn hessenberg(&self) -> &Hessenberg {
        &self.hess
    }

    /// Factor `H - zI`. Fails if an exact zero pivot appears.
    pub fn factor(&self, z: Complex64) -> Result<ShiftedFactor<'_>> {
        let n = self.dim();
        let mut r = self.hess.h().shift_diagonal(z);
        let mut rots = Vec::with_capacity(n.saturating_sub(1));
        for k in 0..n.saturating_sub(1) {
            let (c, s) = givens(r[(k, k)], r[(k + 1, k)]);
            for j in k..n {
                let x = r[(k, j)];
                let y = r[(k + 1, j)];
                r[(k, j)] = x * c + s * y;
                r[(k + 1, j)] = -s.conj() * x + y * c;
            }
            r[(k + 1, k)] = Complex64::new(0.0, 0.0);
            rots.push((c, s));
        }
        if (0..n).any(|i| r[(i, i)].norm() == 0.0) {
            return Err(Error::NearSingularShift { z, s_min: 0.0 });
        }
        Ok(ShiftedFactor {
            system: self,
            z,
            r,
            rots,
        })
    }
}

/// Factorization `H - zI = G^* R` for one shift.
#[derive(Clone, Debug)]
pub struct ShiftedFactor<'a> {
    system: &'a ShiftedSystem,
    z: Complex64,
    r: ComplexMatrix,
    rots: Vec<(f64, Complex64)>,
}

impl ShiftedFactor<'_> {
    pub fn shift(&self) -> Complex64 {
        self.z
    }

    // (H - zI) y = c in Hessenberg coordinates
    fn solve_reduced(&self, c: &[Complex64]) -> Vec<Complex64> {
        let n = c.len();
        let mut y = c.to_vec();
        for (k, &(cr, s)) in self.rots.iter().enumerate() {
            let (a, b) = (y[k], y[k + 1]);
            y[k] = a * cr + s * b;
            y[k + 1] = -s.conj() * a + b * cr;
        }
        for i in (0..n).rev() {
            let row = self.r.row(i);
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= row[j] * y[j];
            }
            y[i] = acc / row[i];
        }
        y
    }

    // (H - zI)^* y = c in Hessenberg coordinates
    fn solve_reduced_adjoint(&self, c: &[Complex64]) -> Vec<Complex64> {
        let n = c.len();
        let mut w = c.to_vec();
        for i in 0..n {
            let mut acc = w[i];
            for j in 0..i {
                acc -= self.r[(j, i)].conj() * w[j];
            }
            w[i] = acc / self.r[(i, i)].conj();
        }
        for (k, &(cr, s)) in self.rots.iter().enumerate().rev() {
            let (a, b) = (w[k], w[k + 1]);
            w[k] = a * cr - s * b;
            w[k + 1] = s.conj() * a + b * cr;
        }
        w
    }

    /// `(M - zI)^{-1} b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let hess = self.system.hessenberg();
        hess.apply_q(&self.solve_reduced(&hess.apply_q_adjoint(b)))
    }

    /// `u^* (M - zI)^{-1} v`.
    pub fn bilinear(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let hess = self.system.hessenberg();
        let qu = hess.apply_q_adjoint(u);
        let y = self.solve_reduced(&hess.apply_q_adjoint(v));
        qu.iter().zip(&y).map(|(a, b)| a.conj() * b).sum()
    }

    /// `||(M - zI)^{-1}||`; `Q` is unitary so this equals the norm of the
    /// reduced inverse.
    pub fn inverse_norm(&self) -> f64 {
        top_eigenvalue(self.r.rows(), |x| self.solve_reduced_adjoint(&self.solve_reduced(x)))
            .max(0.0)
            .sqrt()
    }

    /// `s_min(M - zI) = 1 / ||(M - zI)^{-1}||`.
    pub fn smallest_singular_value(&self) -> f64 {
        1.0 / self.inverse_norm()
    }
}
