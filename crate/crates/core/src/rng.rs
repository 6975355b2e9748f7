//! Seed derivation.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded with
//! `seed_from_u64`. Child seeds (one per image, per trial, ...) come from a
//! splitmix64 stream over the master seed: child `i` is
//! `splitmix64(master + (i + 1) * 0x9E3779B97F4A7C15)`. Results therefore
//! never depend on scheduling or on how many children are drawn.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th child stream of `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
