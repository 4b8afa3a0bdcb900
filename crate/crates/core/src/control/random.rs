use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::EnvAction;
use crate::scalar::Real;

/// Uniform `[-1, 1]` action for step `step_index`, reproducible from `(seed, step_index)`
/// alone: each step draws from its own ChaCha stream.
pub fn random_policy<T: Real>(seed: u64, step_index: usize, dim: usize) -> EnvAction<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(step_index as u64);
    EnvAction { values: (0..dim).map(|_| T::lit(rng.random_range(-1.0..=1.0))).collect() }
}
