//! Independent reference implementations and synthetic data shared by the
//! integration tests.
#![allow(dead_code)]

pub mod desk;
pub mod oracles;
pub mod planted;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
