use num_complex::Complex64;
use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest total order `p + c` served by [`AtomVariable::moment`].
pub const MAX_MOMENT_ORDER: usize = 8;

/// Distribution of the entries of an iid matrix. Every kind has mean zero and
/// independent real and imaginary parts; only `ComplexGaussian` has a
/// nonzero imaginary part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AtomVariable {
    /// Symmetric +-1.
    Rademacher,
    /// Standard real normal.
    RealGaussian,
    /// `(g1 + i g2) / sqrt(2)` with independent standard normals.
    ComplexGaussian,
    /// `+-sigma` with equal probability.
    ScaledRademacher { sigma: f64 },
    /// Real finitely supported law; must have mean zero. Need not be
    /// symmetric, which is what makes third moments available to the
    /// path-graph tests.
    Discrete { support: Vec<f64>, probs: Vec<f64> },
}

/// Law of one real coordinate (real or imaginary part) of an atom.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum PartLaw {
    Zero,
    Points(Vec<(f64, f64)>),
    Gaussian { std: f64 },
}

impl AtomVariable {
    /// Validated finitely supported atom.
    pub fn discrete(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        let atom = AtomVariable::Discrete { support, probs };
        atom.validate()?;
        Ok(atom)
    }

    pub fn scaled_rademacher(sigma: f64) -> Result<Self> {
        let atom = AtomVariable::ScaledRademacher { sigma };
        atom.validate()?;
        Ok(atom)
    }

    /// Checks the invariants that deserialization cannot enforce.
    pub fn validate(&self) -> Result<()> {
        match self {
            AtomVariable::ScaledRademacher { sigma } => {
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "scaled Rademacher needs sigma > 0, got {sigma}"
                    )));
                }
            }
            AtomVariable::Discrete { support, probs } => {
                if support.is_empty() || support.len() != probs.len() {
                    return Err(Error::InvalidArgument(
                        "discrete atom needs matching, nonempty support and probabilities".into(),
                    ));
                }
                if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || support.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidArgument(
                        "discrete atom has a negative or non-finite entry".into(),
                    ));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!("discrete probabilities sum to {total}")));
                }
                let mean: f64 = support.iter().zip(probs).map(|(x, p)| x * p).sum();
                if mean.abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!("discrete atom has mean {mean}")));
                }
                if self.variance() <= 0.0 {
                    return Err(Error::InvalidArgument("discrete atom has zero variance".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, AtomVariable::ComplexGaussian)
    }

    /// `E|xi|^2`.
    pub fn variance(&self) -> f64 {
        match self {
            AtomVariable::Rademacher | AtomVariable::RealGaussian | AtomVariable::ComplexGaussian => 1.0,
            AtomVariable::ScaledRademacher { sigma } => sigma * sigma,
            AtomVariable::Discrete { support, probs } => support.iter().zip(probs).map(|(x, p)| x * x * p).sum(),
        }
    }

    /// Standard deviation `sigma = sqrt(E|xi|^2)`.
    pub fn sigma(&self) -> f64 {
        self.variance().sqrt()
    }

    /// `E|xi|^4`.
    pub fn fourth_moment(&self) -> f64 {
        match self {
            AtomVariable::Rademacher => 1.0,
            AtomVariable::RealGaussian => 3.0,
            AtomVariable::ComplexGaussian => 2.0,
            AtomVariable::ScaledRademacher { sigma } => sigma.powi(4),
            AtomVariable::Discrete { support, probs } => support.iter().zip(probs).map(|(x, p)| x.powi(4) * p).sum(),
        }
    }

    /// Truncation threshold `sqrt(8 E|xi|^4)` above which the truncated
    /// variance is guaranteed to be at least 1/2 (for unit-variance atoms).
    pub fn truncation_l0(&self) -> f64 {
        (8.0 * self.fourth_moment()).sqrt()
    }

    /// Exact mixed moment `E[xi^p conj(xi)^c]` for `p + c <= 8`.
    pub fn moment(&self, p: usize, c: usize) -> Result<Complex64> {
        let order = p + c;
        if order > MAX_MOMENT_ORDER {
            return Err(Error::UnsupportedMoment(order));
        }
        let real = |x: f64| Ok(Complex64::new(x, 0.0));
        match self {
            AtomVariable::Rademacher => real(if order.is_multiple_of(2) { 1.0 } else { 0.0 }),
            AtomVariable::ScaledRademacher { sigma } => real(if order.is_multiple_of(2) {
                sigma.powi(order as i32)
            } else {
                0.0
            }),
            AtomVariable::RealGaussian => real(if order.is_multiple_of(2) {
                double_factorial(order.saturating_sub(1))
            } else {
                0.0
            }),
            // circular complex normal with E|xi|^2 = 1: E[xi^p conj(xi)^c] = p! [p == c]
            AtomVariable::ComplexGaussian => real(if p == c { factorial(p) } else { 0.0 }),
            AtomVariable::Discrete { support, probs } => {
                real(support.iter().zip(probs).map(|(x, w)| x.powi(order as i32) * w).sum())
            }
        }
    }

    pub(crate) fn parts(&self) -> (PartLaw, PartLaw) {
        match self {
            AtomVariable::Rademacher => (PartLaw::Points(vec![(-1.0, 0.5), (1.0, 0.5)]), PartLaw::Zero),
            AtomVariable::ScaledRademacher { sigma } => {
                (PartLaw::Points(vec![(-sigma, 0.5), (*sigma, 0.5)]), PartLaw::Zero)
            }
            AtomVariable::RealGaussian => (PartLaw::Gaussian { std: 1.0 }, PartLaw::Zero),
            AtomVariable::ComplexGaussian => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                (PartLaw::Gaussian { std: s }, PartLaw::Gaussian { std: s })
            }
            AtomVariable::Discrete { support, probs } => (
                PartLaw::Points(support.iter().copied().zip(probs.iter().copied()).collect()),
                PartLaw::Zero,
            ),
        }
    }

    /// One draw.
    pub fn sample(&self, rng: &mut dyn RngCore) -> Complex64 {
        match self {
            AtomVariable::Rademacher => Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0),
            AtomVariable::ScaledRademacher { sigma } => {
                Complex64::new(if rng.random::<bool>() { *sigma } else { -sigma }, 0.0)
            }
            AtomVariable::RealGaussian => Complex64::new(StandardNormal.sample(rng), 0.0),
            AtomVariable::ComplexGaussian => {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            }
            AtomVariable::Discrete { support, probs } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (x, p) in support.iter().zip(probs) {
                    acc += p;
                    if u < acc {
                        return Complex64::new(*x, 0.0);
                    }
                }
                Complex64::new(*support.last().expect("validated nonempty"), 0.0)
            }
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

fn double_factorial(k: usize) -> f64 {
    (1..=k).rev().step_by(2).map(|x| x as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn moment_examples() {
        let r = AtomVariable::Rademacher;
        assert_eq!(r.moment(2, 0).unwrap().re, 1.0);
        assert_eq!(r.moment(3, 0).unwrap().re, 0.0);
        assert_eq!(AtomVariable::RealGaussian.moment(4, 0).unwrap().re, 3.0);
        assert_eq!(AtomVariable::RealGaussian.moment(6, 0).unwrap().re, 15.0);
        assert_eq!(AtomVariable::ComplexGaussian.moment(2, 2).unwrap().re, 2.0);
        assert_eq!(AtomVariable::ComplexGaussian.moment(2, 0).unwrap().re, 0.0);
        assert_eq!(r.moment(5, 4), Err(Error::UnsupportedMoment(9)));
    }

    #[test]
    fn gaussian_fourth_moment_by_monte_carlo() {
        let mut rng = stream_rng(11, 0);
        let n = 1_000_000;
        let m4: f64 = (0..n)
            .map(|_| AtomVariable::RealGaussian.sample(&mut rng).re.powi(4))
            .sum::<f64>()
            / n as f64;
        assert!((m4 - 3.0).abs() < 0.05, "empirical fourth moment {m4}");
    }

    #[test]
    fn centered_and_variance_for_every_kind() {
        let atoms = [
            AtomVariable::Rademacher,
            AtomVariable::RealGaussian,
            AtomVariable::ComplexGaussian,
            AtomVariable::scaled_rademacher(1.7).unwrap(),
            AtomVariable::discrete(vec![-1.0, 2.0], vec![2.0 / 3.0, 1.0 / 3.0]).unwrap(),
        ];
        for a in &atoms {
            assert_eq!(a.moment(1, 0).unwrap().norm(), 0.0, "{a:?}");
            assert!((a.moment(1, 1).unwrap().re - a.variance()).abs() < 1e-12, "{a:?}");
            assert!(a.fourth_moment() >= a.variance().powi(2) - 1e-12);
        }
    }

    #[test]
    fn discrete_validation() {
        assert!(AtomVariable::discrete(vec![1.0, 2.0], vec![0.5, 0.5]).is_err());
        assert!(AtomVariable::discrete(vec![1.0], vec![0.5, 0.5]).is_err());
        assert!(AtomVariable::scaled_rademacher(0.0).is_err());
        // asymmetric but centered: third moment -1*(2/3) + 8*(1/3) = 2
        let a = AtomVariable::discrete(vec![-1.0, 2.0], vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!((a.moment(3, 0).unwrap().re - 2.0).abs() < 1e-12);
    }
}
