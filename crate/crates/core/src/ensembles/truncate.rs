use num_complex::Complex64;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::atom::{AtomVariable, PartLaw};
use crate::error::{Error, Result};

/// Level used when an experiment asks for truncation without naming one.
pub const DEFAULT_TRUNCATION_LEVEL: f64 = 10.0;

const QUADRATURE_TOL: f64 = 1e-10;

/// Atom whose real and imaginary parts are cut off at `L / sqrt(2)`,
/// recentered, and rescaled to unit variance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedAtom {
    base: AtomVariable,
    level: f64,
    var_tilde: f64,
    re_mean: f64,
    im_mean: f64,
}

impl TruncatedAtom {
    pub fn base(&self) -> &AtomVariable {
        &self.base
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// Variance of the centered truncated variable before rescaling.
    pub fn var_tilde(&self) -> f64 {
        self.var_tilde
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> Complex64 {
        let raw = self.base.sample(rng);
        let cut = self.level / std::f64::consts::SQRT_2;
        let keep = |x: f64| if x.abs() <= cut { x } else { 0.0 };
        let centered = Complex64::new(keep(raw.re) - self.re_mean, keep(raw.im) - self.im_mean);
        centered / self.var_tilde.sqrt()
    }
}

/// Builds the truncated atom at level `level`.
pub fn truncate(atom: &AtomVariable, level: f64) -> Result<TruncatedAtom> {
    if !(level.is_finite() && level > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "truncation level must be positive, got {level}"
        )));
    }
    atom.validate()?;
    let cut = level / std::f64::consts::SQRT_2;
    let (re, im) = atom.parts();
    let (re_mean, re_second) = truncated_moments(&re, cut);
    let (im_mean, im_second) = truncated_moments(&im, cut);
    let var_tilde = (re_second - re_mean * re_mean) + (im_second - im_mean * im_mean);
    if !(var_tilde >= 1e-12) {
        return Err(Error::DegenerateTruncation(var_tilde));
    }
    Ok(TruncatedAtom {
        base: atom.clone(),
        level,
        var_tilde,
        re_mean,
        im_mean,
    })
}

// (E[x 1{|x|<=c}], E[x^2 1{|x|<=c}])
fn truncated_moments(law: &PartLaw, cut: f64) -> (f64, f64) {
    match law {
        PartLaw::Zero => (0.0, 0.0),
        PartLaw::Points(points) => points
            .iter()
            .filter(|(x, _)| x.abs() <= cut)
            .fold((0.0, 0.0), |(m1, m2), (x, p)| (m1 + x * p, m2 + x * x * p)),
        PartLaw::Gaussian { std } => {
            let density = |x: f64| {
                let t = x / std;
                (-0.5 * t * t).exp() / (std * (2.0 * std::f64::consts::PI).sqrt())
            };
            let m1 = adaptive_simpson(&|x| x * density(x), -cut, cut, QUADRATURE_TOL);
            let m2 = adaptive_simpson(&|x| x * x * density(x), -cut, cut, QUADRATURE_TOL);
            (m1, m2)
        }
    }
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}
