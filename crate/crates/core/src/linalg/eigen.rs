//! General (non-Hermitian) eigenvalues: Householder reduction to upper
//! Hessenberg form followed by shifted complex QR iteration with Wilkinson
//! shifts and small-subdiagonal deflation.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, Spectrum};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Unitary similarity `M = Q H Q^*` with `H` upper Hessenberg. `Q` is kept
/// implicitly as the product of the Householder reflectors.
#[derive(Clone, Debug)]
pub struct Hessenberg {
    h: ComplexMatrix,
    // reflector k acts on coordinates k+1.. and is I - 2 v v^* with unit v
    reflectors: Vec<Vec<Complex64>>,
}

impl Hessenberg {
    pub fn reduce(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "Hessenberg reduction needs a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let mut h = m.clone();
        let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
        for k in 0..n.saturating_sub(2) {
            let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
            let v = match householder(&x) {
                Some(v) => v,
                None => {
                    reflectors.push(Vec::new());
                    continue;
                }
            };
            // left: rows k+1.., columns k..
            for j in k..n {
                let mut s = ZERO;
                for (t, vi) in v.iter().enumerate() {
                    s += vi.conj() * h[(k + 1 + t, j)];
                }
                let s = s * 2.0;
                for (t, vi) in v.iter().enumerate() {
                    h[(k + 1 + t, j)] -= vi * s;
                }
            }
            // right: all rows, columns k+1..
            for i in 0..n {
                let row = &mut h.as_mut_slice()[i * n + k + 1..(i + 1) * n];
                let s: Complex64 = row.iter().zip(&v).map(|(a, b)| a * b).sum::<Complex64>() * 2.0;
                for (a, b) in row.iter_mut().zip(&v) {
                    *a -= s * b.conj();
                }
            }
            for i in k + 2..n {
                h[(i, k)] = ZERO;
            }
            reflectors.push(v);
        }
        Ok(Self { h, reflectors })
    }

    pub fn h(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    /// `Q^* x`.
    pub fn apply_q_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = x.to_vec();
        for (k, v) in self.reflectors.iter().enumerate() {
            apply_reflector(v, &mut y[k + 1..]);
        }
        y
    }

    /// `Q x`.
    pub fn apply_q(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = x.to_vec();
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            apply_reflector(v, &mut y[k + 1..]);
        }
        y
    }

    /// Eigenvalues of `H` (equivalently of the reduced matrix).
    pub fn eigenvalues(&self) -> Result<Spectrum> {
        let values = hessenberg_qr(self.h.clone())?;
        Ok(Spectrum::new(values))
    }
}

fn apply_reflector(v: &[Complex64], y: &mut [Complex64]) {
    if v.is_empty() {
        return;
    }
    let s: Complex64 = v.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>() * 2.0;
    for (yi, vi) in y.iter_mut().zip(v) {
        *yi -= vi * s;
    }
}

// Unit v with (I - 2 v v^*) x = alpha e_1, or None when x is already a
// multiple of e_1.
fn householder(x: &[Complex64]) -> Option<Vec<Complex64>> {
    let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if tail == 0.0 {
        return None;
    }
    let norm = (x[0].norm_sqr() + tail).sqrt();
    let phase = if x[0].norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        x[0] / x[0].norm()
    };
    let alpha = -phase * norm;
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= vn);
    Some(v)
}

fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Eigenvalues of an upper Hessenberg matrix by shifted QR on the active
/// window. Only the active diagonal block is updated, since the eigenvalues
/// of a block triangular matrix are those of its diagonal blocks.
fn hessenberg_qr(mut h: ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let mut values = vec![ZERO; n];
    if n == 0 {
        return Ok(values);
    }
    let hash = h.content_hash();
    let ulp = f64::EPSILON;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / ulp);
    // normwise floor: deflating below it is backward stable, and it stops
    // rounding-noise clusters (e.g. the null space of a low-rank matrix)
    // from iterating on their own tiny scale
    let floor = ulp * h.hs_norm();
    let max_iterations = 100 * n.max(1);
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut its = 0usize;

    loop {
        // find the active window [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let sub = cabs1(h[(lo, lo - 1)]);
            if sub <= smlnum.max(floor) {
                break;
            }
            let mut tst = cabs1(h[(lo - 1, lo - 1)]) + cabs1(h[(lo, lo)]);
            if tst == 0.0 {
                if lo >= 2 {
                    tst += h[(lo - 1, lo - 2)].re.abs();
                }
                if lo + 1 < n {
                    tst += h[(lo + 1, lo)].re.abs();
                }
            }
            if sub <= ulp * tst {
                // Ahues & Tisseur refinement
                let ab = sub.max(cabs1(h[(lo - 1, lo)]));
                let ba = sub.min(cabs1(h[(lo - 1, lo)]));
                let diff = h[(lo - 1, lo - 1)] - h[(lo, lo)];
                let aa = cabs1(h[(lo, lo)]).max(cabs1(diff));
                let bb = cabs1(h[(lo, lo)]).min(cabs1(diff));
                let s = aa + ab;
                if ba * (ab / s) <= (smlnum).max(ulp * (bb * (aa / s))) {
                    break;
                }
            }
            lo -= 1;
        }
        if lo > 0 {
            h[(lo, lo - 1)] = ZERO;
        }
        if lo == hi {
            values[hi] = h[(hi, hi)];
            its = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        if hi == lo + 1 {
            // 2x2 block: closed form
            let (a, b, c, d) = (h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            let (l1, l2) = eig2(a, b, c, d);
            values[lo] = l1;
            values[hi] = l2;
            its = 0;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            continue;
        }

        total += 1;
        its += 1;
        if total > max_iterations {
            return Err(Error::NoConvergence {
                iterations: total,
                hash,
            });
        }

        let mu = if its.is_multiple_of(10) {
            // exceptional shift
            h[(hi, hi)] + cabs1(h[(hi, hi - 1)]) * 0.75
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, lo, hi, mu);
    }
    Ok(values)
}

// eigenvalue of [[a, b], [c, d]] closest to d
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let t = (a - d) * 0.5;
    let disc = (t * t + b * c).sqrt();
    let den1 = t + disc;
    let den2 = t - disc;
    let den = if den1.norm() >= den2.norm() { den1 } else { den2 };
    if den.norm() == 0.0 {
        d
    } else {
        d - b * c / den
    }
}

fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let mean = (a + d) * 0.5;
    let t = (a - d) * 0.5;
    let disc = (t * t + b * c).sqrt();
    let l1 = mean + disc;
    let l2 = mean - disc;
    // recompute the smaller one from the product to limit cancellation
    let det = a * d - b * c;
    if l1.norm() >= l2.norm() && l1.norm() > 0.0 {
        (l1, det / l1)
    } else if l2.norm() > 0.0 {
        (det / l2, l2)
    } else {
        (l1, l2)
    }
}

// One explicitly shifted QR step H - mu I = QR, H <- RQ + mu I on [lo, hi],
// with Givens rotations G = [[c, s], [-conj(s), c]], c real.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let (c, s) = givens(a, b);
        rots.push((c, s));
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        h[(k + 1, k)] = ZERO;
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = lo + idx;
        let last = (k + 1).min(hi);
        for i in lo..=last {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + s.conj() * y;
            h[(i, k + 1)] = -s * x + y * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

/// Rotation with real `c` such that `[[c, s], [-conj(s), c]] [a; b] = [r; 0]`.
pub(crate) fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

/// Eigenvalues of a square matrix, ordered by modulus (descending) then
/// argument.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if let Some(pos) = m.as_slice().iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite {
            row: pos / m.cols(),
            col: pos % m.cols(),
        });
    }
    Hessenberg::reduce(m)?.eigenvalues()
}
