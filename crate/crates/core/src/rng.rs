//! Seeded random streams.
//!
//! Every random quantity is addressed by a `(seed, stream)` pair. Work that is
//! split across threads takes one stream per chunk, so the output depends only
//! on the chunk layout and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Number of draws produced from one stream before switching to the next when
/// a long sequence is generated in chunks.
pub const CHUNK: usize = 4096;

pub fn stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}
