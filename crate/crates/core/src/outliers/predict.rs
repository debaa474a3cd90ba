use num_complex::Complex64;

use super::scenario::{sparse_aware_eigenvalues, PerturbationScenario, Regime};
use crate::error::{Error, Result};
use crate::linalg::spectral_order;
use crate::spectra::EmpiricalSpectrum;

/// Predicted outlier locations: eigenvalues of the deterministic limit with
/// modulus at least `sigma + 3 epsilon`, the spike `mu n^gamma` for the
/// nonzero-mean regime, and nothing for pure and multiplicative products.
///
/// Fails with [`Error::BandViolation`] when the deterministic limit has an
/// eigenvalue with `sigma + epsilon < |z| < sigma + 3 epsilon`.
pub fn predict_outliers(sc: &PerturbationScenario) -> Result<Vec<Complex64>> {
    if let Regime::NonzeroMean { mu, gamma } = sc.regime() {
        return Ok(vec![*mu * (sc.n() as f64).powf(*gamma)]);
    }
    let Some(limit) = sc.deterministic_limit() else {
        return Ok(Vec::new());
    };
    let lower = sc.sigma() + sc.epsilon();
    let upper = sc.sigma() + 3.0 * sc.epsilon();
    let vals = sparse_aware_eigenvalues(&limit)?;
    if let Some(bad) = vals.iter().find(|z| z.norm() > lower && z.norm() < upper) {
        return Err(Error::BandViolation {
            eigenvalue: *bad,
            lower,
            upper,
        });
    }
    let mut out: Vec<Complex64> = vals.into_iter().filter(|z| z.norm() >= upper).collect();
    out.sort_by(spectral_order);
    Ok(out)
}

/// Eigenvalues with modulus at least `threshold`, in spectral order.
pub fn detect_outliers(spectrum: &EmpiricalSpectrum, threshold: f64) -> Vec<Complex64> {
    spectrum
        .eigenvalues()
        .iter()
        .copied()
        .filter(|z| z.norm() >= threshold)
        .collect()
}
