//! Entry distributions, truncation, and seeded iid sampling.

mod atom;
mod sample;
mod truncate;

pub use atom::{AtomVariable, MAX_MOMENT_ORDER};
pub use sample::{sample_iid_matrix, sample_iid_matrix_on_stream, EntryLaw};
pub use truncate::{truncate, TruncatedAtom, DEFAULT_TRUNCATION_LEVEL};
