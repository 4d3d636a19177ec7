//! Deterministic random-number streams.
//!
//! Every stochastic operation takes an [`RngStream`]. A stream is fully
//! determined by `(seed, stream index)`, and replicate-level work derives one
//! child stream per replicate index, so results are reproducible and
//! independent of how replicates are scheduled across workers.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default seed used by the CLI and the verification suite.
pub const DEFAULT_SEED: u64 = 314_159_265;

/// Offset separating replicate substreams from their parent stream index.
const SUBSTREAM_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// A counter-based random stream: identical `(seed, stream)` pairs reproduce
/// identical draw sequences.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    /// Creates the stream for `(seed, stream)`.
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Root stream for a run.
    pub fn from_seed(seed: u64) -> Self {
        Self::new(seed, 0)
    }

    /// Derives the replicate stream `index` under this stream.
    ///
    /// Children of distinct parents stay distinct because the parent stream
    /// index is folded into the child index with a fixed odd multiplier.
    pub fn substream(&self, index: u64) -> Self {
        let child = self
            .stream
            .wrapping_mul(SUBSTREAM_SALT)
            .wrapping_add(index.wrapping_add(1));
        Self::new(self.seed, child)
    }

    /// Seed this stream was created with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stream index this stream was created with.
    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}
