use rand::Rng as _;

use crate::domain::{Channel, Coloring};
use crate::rng::{rng_from_seed, Rng};

/// Independent uniform channel in `1..=k` for each of `n` APs.
pub fn random_assignment(n: usize, k: usize, rng: &mut Rng) -> Vec<Channel> {
    assert!(k >= 1, "spectrum must hold at least one channel");
    (0..n).map(|_| rng.random_range(1..=k as Channel)).collect()
}

pub fn random_coloring(ap_ids: &[u32], k: usize, seed: u64) -> Coloring {
    let mut rng = rng_from_seed(seed);
    Coloring::from_assignment(ap_ids, &random_assignment(ap_ids.len(), k, &mut rng))
}
