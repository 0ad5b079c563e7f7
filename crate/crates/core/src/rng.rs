//! Reproducible random streams.
//!
//! Every stream is a [`ChaCha20Rng`] seeded from a 64-bit key. Keys for
//! sub-streams (scenario, replicate, Monte Carlo block) are derived from the
//! master seed by chaining the SplitMix64 finalizer over the identifying
//! integers, so a stream depends only on its coordinates and never on
//! execution order or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Generator used for all sampling.
pub type SimRng = ChaCha20Rng;

/// Identifier echoed into run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha20Rng (rand_chacha 0.10) seeded via SplitMix64 key chaining";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `parts` into `seed`, one SplitMix64 round per part.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn stream(seed: u64, parts: &[u64]) -> SimRng {
    SimRng::seed_from_u64(derive_seed(seed, parts))
}
