//! The one pseudo-random generator used across the crate.
//!
//! All randomness (graph generation, game sampling) goes through
//! [`ChaCha8Rng`] seeded with [`rand::SeedableRng::seed_from_u64`]. ChaCha's
//! output stream is specified independently of platform, word size and
//! endianness, so a `(seed, call sequence)` pair reproduces the same values
//! everywhere.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for the `index`-th independent stream derived from `seed`
/// (splitmix64 finalizer, so neighbouring indices give unrelated seeds).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
