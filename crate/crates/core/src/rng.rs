//! Seed derivation.
//!
//! Every random draw in the crate comes from a ChaCha20 stream whose seed is a
//! pure function of the master seed and a small tuple of stream coordinates
//! (phase, fold, purpose). Work items can therefore run in any order, on any
//! number of threads, and still see the same numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

/// Which part of an experiment a stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    Resample,
    Training,
    Testing,
    Model,
    AttackPool,
    Synthetic,
    Selection,
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Resample => 1,
            Stream::Training => 2,
            Stream::Testing => 3,
            Stream::Model => 4,
            Stream::AttackPool => 5,
            Stream::Synthetic => 6,
            Stream::Selection => 7,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with stream coordinates into a child seed.
pub fn derive_seed(master: u64, stream: Stream, fold: u64, sub: u64) -> u64 {
    let mut h = splitmix64(master);
    h = splitmix64(h ^ stream.tag());
    h = splitmix64(h ^ fold);
    splitmix64(h ^ sub)
}

/// Independent child seed `index` of `seed`.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

pub fn rng_from_seed(seed: u64) -> StreamRng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn stream_rng(master: u64, stream: Stream, fold: u64, sub: u64) -> StreamRng {
    rng_from_seed(derive_seed(master, stream, fold, sub))
}

/// Bernoulli draw that always consumes exactly one uniform, even for p in {0, 1}.
pub fn bernoulli<R: Rng + ?Sized>(rng: &mut R, p: f64) -> bool {
    rng.random::<f64>() < p
}
