//! Dense complex linear algebra kernel.

mod eigen;
mod lanczos;
mod lu;
mod matrix;
mod shifted;
mod svd;
mod update;

pub use eigen::{eigenvalues, Hessenberg};
pub use lanczos::top_eigenvalue;
pub use lu::{determinant, inverse, resolvent, solve, Lu};
pub use matrix::{inner, spectral_order, vec_norm, ComplexMatrix, Spectrum};
pub use shifted::{ShiftedFactor, ShiftedSystem};
pub use svd::{low_rank_factor, operator_norm, operator_norm_estimate, rank, singular_values, svd, Svd};
pub use update::sherman_morrison_inverse;

/// Hilbert-Schmidt norm `sqrt(tr(M M^*))`.
pub fn hs_norm(m: &ComplexMatrix) -> f64 {
    m.hs_norm()
}
