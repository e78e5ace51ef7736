//! Reproducible random streams.
//!
//! Every consumer of randomness gets its own ChaCha8 stream keyed by
//! `(master_seed, purpose, index)`, so results do not depend on how runs
//! are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Estimation = 1,
    Simulation = 2,
    Attributes = 3,
    Study = 4,
}

pub fn stream(master_seed: u64, purpose: Purpose, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((purpose as u64) << 48) ^ index);
    rng
}
