//! Monte Carlo sampling of increments X_t and of the small-jump martingale
//! M_t(ε), with reproducible counter-based random streams.
//!
//! Every draw `i` of an estimate uses its own generator keyed by
//! `(master_seed, stream_id)` and positioned on stream `i`, so the result
//! depends on the seed and the sample size only, never on how the draws are
//! split across shards.
//!
//! Sampling is `f64` only.

mod estimate;
mod samplers;
mod scheme;
mod stats;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use estimate::{estimate, estimate_tail_prob, BiasBracket, CiMethod, MCEstimate, McConfig, Tail};
pub use samplers::{
    sample_compound_poisson, sample_increment, sample_small_jumps, stable_scale, IncrementSampler,
    SmallJumpSampler,
};
pub use scheme::SmallJumpScheme;
pub use stats::{clopper_pearson, ks_two_sample, wilson, KsTest};

/// Generator used for every draw.
pub type Rng = ChaCha8Rng;

/// A family of independent random streams derived from one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SeededStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeededStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        SeededStream { master_seed, stream_id }
    }

    /// Another family from the same master seed.
    pub fn with_id(self, stream_id: u64) -> Self {
        SeededStream { stream_id, ..self }
    }

    /// Generator for draw number `index`.
    pub fn rng(&self, index: u64) -> Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream_id.to_le_bytes());
        key[16..24].copy_from_slice(b"levytail");
        let mut rng = Rng::from_seed(key);
        rng.set_stream(index);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let s = SeededStream::new(7, 0);
        let a: u64 = s.rng(3).random();
        let b: u64 = s.rng(3).random();
        let c: u64 = s.rng(4).random();
        let d: u64 = s.with_id(1).rng(3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }
}
