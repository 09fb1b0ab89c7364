//! Seed derivation.
//!
//! Every random draw in the crate comes from a `ChaCha8Rng` seeded with a
//! 64-bit value. Child streams (the i-th operator of an estimate, the i-th
//! sample of a batch, the i-th probe of a radius search) are seeded with
//! `derive_seed(parent, i)`, a SplitMix64 finalizer applied to the pair, so
//! results never depend on the order in which work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child stream `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix(mix(master.wrapping_add(GOLDEN)) ^ index.wrapping_mul(GOLDEN).wrapping_add(1))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
