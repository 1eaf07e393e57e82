//! Seeded randomness.
//!
//! Every stochastic routine draws from [`Rng`], ChaCha with 8 rounds. Its
//! output stream is specified independently of platform and word size, so a
//! seed reproduces the same trace everywhere. Child seeds for corpora and
//! experiment cells are derived from a master seed with SplitMix64 mixing.

use rand::SeedableRng;

pub type Rng = rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `master` and a path of stream indices.
///
/// Distinct paths give statistically independent seeds; the same path always
/// gives the same seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}
