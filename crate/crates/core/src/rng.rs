//! Deterministic RNG substreams.
//!
//! Every random quantity of frame `i` comes from its own ChaCha8 stream keyed by
//! `(seed, i, purpose)`, so frames can be rendered in any order or on any number
//! of threads and still produce the same bits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Beta = 0,
    Ambient = 1,
    Shot = 2,
}

pub fn substream(seed: u64, frame_index: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((frame_index << 2) | purpose as u64);
    rng
}
