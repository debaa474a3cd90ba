//! Seeded random streams.
//!
//! Every random object is drawn from a ChaCha8 stream (a counter-based
//! generator) keyed by a 64-bit seed and a 64-bit stream id. Per-trial and
//! per-factor seeds are derived as `seed ^ splitmix64(index)`, so each
//! `(seed, trial, factor)` triple names one fixed, reproducible stream no
//! matter which thread draws it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for child `index` of `seed` (a trial, a factor, ...).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed ^ splitmix64(index)
}

/// Generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
