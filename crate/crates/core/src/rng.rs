//! Seeded random streams.
//!
//! Every stochastic step in the crate (synthetic data, corruption masks,
//! weight init, fold assignment) draws from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`. The ChaCha stream is specified and portable,
//! so a seed reproduces the same draws on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
