//! Seeded, splittable random-number streams.
//!
//! Every pipeline stage derives its generators from a single 64-bit master
//! seed, so identical invocations reproduce identical artifacts and parallel
//! workers get independent streams without sharing state.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type Rng = ChaCha8Rng;

/// A fresh generator for `(seed, stream)`. Streams are independent: worker
/// `i` of a parallel stage uses stream `i` and never touches its siblings.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The default stream for single-threaded stages.
pub fn seeded(seed: u64) -> Rng {
    stream(seed, 0)
}
