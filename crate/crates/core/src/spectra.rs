//! Empirical spectra of products and their distance to the limiting radial law.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Spectrum;

/// Eigenvalues of one realized `n x n` product of `m` factors whose atom
/// standard deviations multiply to `sigma`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSpectrum {
    eigenvalues: Vec<Complex64>,
    n: usize,
    m: usize,
    sigma: f64,
}

impl EmpiricalSpectrum {
    pub fn new(eigenvalues: Vec<Complex64>, n: usize, m: usize, sigma: f64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(
                "empirical spectrum needs n >= 1 and m >= 1".into(),
            ));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Self {
            eigenvalues: Spectrum::new(eigenvalues).into_vec(),
            n,
            m,
            sigma,
        })
    }

    pub fn from_spectrum(spectrum: Spectrum, m: usize, sigma: f64) -> Result<Self> {
        let n = spectrum.source_dim();
        Self::new(spectrum.into_vec(), n, m, sigma)
    }

    /// Eigenvalues in spectral order (modulus descending).
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Kolmogorov-Smirnov distance between the empirical law of `|lambda|`
    /// and [`limit_radial_cdf`].
    pub fn radial_ks(&self) -> f64 {
        let mut radii: Vec<f64> = self.eigenvalues.iter().map(|z| z.norm()).collect();
        radii.sort_by(f64::total_cmp);
        let total = radii.len() as f64;
        radii
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let f = limit_radial_cdf(r, self.sigma, self.m);
                ((i + 1) as f64 / total - f).max(f - i as f64 / total)
            })
            .fold(0.0, f64::max)
    }
}

/// Mass of the limiting density inside radius `r`: `min(1, (r/sigma)^{2/m})`.
pub fn limit_radial_cdf(r: f64, sigma: f64, m: usize) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    (r / sigma).powf(2.0 / m as f64).min(1.0)
}
