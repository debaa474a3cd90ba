//! Numerical core of a laboratory for spectra of products of iid random
//! matrices under low-rank perturbations.

pub mod assignment;
pub mod ensembles;
pub mod error;
pub mod isotropic;
pub mod linalg;
pub mod linearization;
pub mod outliers;
pub mod par;
pub mod pathgraphs;
pub mod rng;
pub mod spectra;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Spectrum};
pub use num_complex::Complex64;
