//! Seeded, platform-independent randomness.
//!
//! ChaCha8 output is specified bit-for-bit, so a seed reproduces the same
//! stream on every target.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Decorrelated child seed for the `index`-th independent task under `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser over the combined input
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
