use num_complex::Complex64;
use rand::RngCore;

use super::atom::AtomVariable;
use super::truncate::TruncatedAtom;
use crate::linalg::ComplexMatrix;
use crate::rng::stream_rng;

/// Anything that can fill the entries of an iid matrix.
pub trait EntryLaw: Sync {
    fn sample_entry(&self, rng: &mut dyn RngCore) -> Complex64;
    /// `E|xi|^2`.
    fn entry_variance(&self) -> f64;
}

impl EntryLaw for AtomVariable {
    fn sample_entry(&self, rng: &mut dyn RngCore) -> Complex64 {
        self.sample(rng)
    }

    fn entry_variance(&self) -> f64 {
        self.variance()
    }
}

impl EntryLaw for TruncatedAtom {
    fn sample_entry(&self, rng: &mut dyn RngCore) -> Complex64 {
        self.sample(rng)
    }

    // rescaled by the truncated standard deviation, so always 1
    fn entry_variance(&self) -> f64 {
        1.0
    }
}

/// `n x n` matrix of iid draws, filled in row-major order from stream 0 of
/// `seed`.
pub fn sample_iid_matrix<L: EntryLaw + ?Sized>(law: &L, n: usize, seed: u64) -> ComplexMatrix {
    sample_iid_matrix_on_stream(law, n, seed, 0)
}

/// Like [`sample_iid_matrix`] but drawing from stream `stream` of `seed`;
/// independent factors of one realization use distinct streams.
pub fn sample_iid_matrix_on_stream<L: EntryLaw + ?Sized>(law: &L, n: usize, seed: u64, stream: u64) -> ComplexMatrix {
    let mut rng = stream_rng(seed, stream);
    let data: Vec<Complex64> = (0..n * n).map(|_| law.sample_entry(&mut rng)).collect();
    ComplexMatrix::new(n, n, data).expect("sampled entries are finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_matrix() {
        let a = sample_iid_matrix(&AtomVariable::Rademacher, 3, 7);
        let b = sample_iid_matrix(&AtomVariable::Rademacher, 3, 7);
        assert_eq!(a, b);
        assert_ne!(a, sample_iid_matrix(&AtomVariable::Rademacher, 3, 8));
    }

    #[test]
    fn rademacher_law_of_large_numbers() {
        let m = sample_iid_matrix(&AtomVariable::Rademacher, 200, 1);
        let n = m.as_slice().len() as f64;
        let mean: Complex64 = m.as_slice().iter().sum::<Complex64>() / n;
        let var = m.as_slice().iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / n;
        assert!(mean.norm() <= 0.02);
        assert!((var - 1.0).abs() <= 0.05);
    }

    #[test]
    fn complex_gaussian_parts_uncorrelated() {
        let m = sample_iid_matrix(&AtomVariable::ComplexGaussian, 100, 2);
        let n = m.as_slice().len() as f64;
        let (mr, mi) = m
            .as_slice()
            .iter()
            .fold((0.0, 0.0), |(a, b), z| (a + z.re / n, b + z.im / n));
        let cov = m.as_slice().iter().map(|z| (z.re - mr) * (z.im - mi)).sum::<f64>() / n;
        assert!(cov.abs() <= 0.05);
    }
}
