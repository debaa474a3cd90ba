//! Largest eigenvalue of a Hermitian positive semidefinite operator by
//! Lanczos iteration with full reorthogonalization.
//!
//! Used to get operator norms (`||A||^2 = lambda_max(A^* A)`) from matrix-free
//! products, which is what the annulus sweeps need: each node only has a
//! factorized shifted system, never an explicit inverse.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::matrix::{inner, vec_norm};

const MAX_STEPS: usize = 300;
const STALL_STEPS: usize = 4;
const REL_TOL: f64 = 1e-15;

/// Top eigenvalue of the Hermitian PSD operator `apply` on `C^dim`.
pub fn top_eigenvalue(dim: usize, mut apply: impl FnMut(&[Complex64]) -> Vec<Complex64>) -> f64 {
    if dim == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2b_3c4d_5e6f_7081);
    let mut q: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let nq = vec_norm(&q);
    q.iter_mut().for_each(|z| *z /= nq);

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    let mut stall = 0;
    let steps = dim.min(MAX_STEPS);

    for _ in 0..steps {
        let mut w = apply(&q);
        let alpha = inner(&q, &w).re;
        basis.push(q);
        alphas.push(alpha);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let h = inner(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= h * y);
            }
        }
        let theta = tridiagonal_max_eigenvalue(&alphas, &betas);
        let beta = vec_norm(&w);
        let scale = theta.abs().max(f64::MIN_POSITIVE);
        if beta <= 1e-14 * scale {
            return theta;
        }
        if (theta - last).abs() <= REL_TOL * scale {
            stall += 1;
            if stall >= STALL_STEPS {
                return theta;
            }
        } else {
            stall = 0;
        }
        last = theta;
        betas.push(beta);
        q = w.into_iter().map(|z| z / beta).collect();
    }
    tridiagonal_max_eigenvalue(&alphas, &betas[..alphas.len() - 1])
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta` (`beta.len() == alpha.len() - 1`), by
/// Sturm-sequence bisection.
pub(crate) fn tridiagonal_max_eigenvalue(alpha: &[f64], beta: &[f64]) -> f64 {
    let n = alpha.len();
    debug_assert_eq!(beta.len() + 1, n);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 } + if i + 1 < n { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    // number of eigenvalues strictly below x
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..n {
            let b2 = if i > 0 { beta[i - 1] * beta[i - 1] } else { 0.0 };
            d = alpha[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -f64::EPSILON * (x.abs() + 1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
