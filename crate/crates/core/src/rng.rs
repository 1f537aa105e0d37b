//! Seeded random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 generator. A stream is
//! identified by `(seed, stream)`: the 64-bit seed is expanded into the
//! ChaCha key with `SeedableRng::seed_from_u64` and the stream id selects one
//! of the 2^64 independent ChaCha streams under that key. Replicate `r` of a
//! study uses stream `r`, so results do not depend on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream id reserved for draws shared by every replicate of a study, such as
/// a fixed Chung-Lu degree sequence.
pub const SHARED_STREAM: u64 = u64::MAX;

/// Generator for stream `stream` under `seed`.
pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator for a single standalone call (stream 0).
pub fn seeded(seed: u64) -> StreamRng {
    stream(seed, 0)
}
