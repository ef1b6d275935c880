//! Deterministic RNG streams.
//!
//! Every stochastic step of a run draws from its own ChaCha stream, derived
//! from the master seed and a stream id. Games evaluated in parallel therefore
//! produce the same results regardless of scheduling, and a run is replayable
//! from the master seed alone. Stream ids are namespaced so no two purposes
//! ever share a stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream-id namespaces. The namespace occupies the top byte of the id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamKind {
    /// Initial population seeds; payload = member index.
    Init = 1,
    /// Reproduction (selection + operators); payload = birth index.
    Breed = 2,
    /// Child-evaluation games; payload = (birth, opponent, game).
    EvalGame = 3,
    /// Full re-evaluation games; payload = (event, pair, game).
    FullEval = 4,
    /// Replace-worst tie breaking; payload = birth index.
    Replace = 5,
    /// Shuffled-opponent generation and games in absolute fitness.
    Absolute = 6,
    /// Anything driven directly by a CLI invocation (soups, shuffle tests).
    Task = 7,
}

/// Derives independent ChaCha streams from one master seed.
#[derive(Clone, Copy, Debug)]
pub struct RngFactory {
    master: u64,
}

impl RngFactory {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Returns the stream for `(kind, payload)`. The payload must stay below
    /// 2^56; callers pack sub-indices with [`pack3`].
    pub fn stream(&self, kind: StreamKind, payload: u64) -> ChaCha8Rng {
        debug_assert!(payload < 1 << 56);
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(((kind as u64) << 56) | payload);
        rng
    }
}

/// Packs three sub-indices into one stream payload (40/12/4 bits).
pub fn pack3(a: u64, b: u64, c: u64) -> u64 {
    debug_assert!(a < 1 << 40 && b < 1 << 12 && c < 1 << 4);
    (a << 16) | (b << 4) | c
}
