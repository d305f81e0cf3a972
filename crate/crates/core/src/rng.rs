//! Counter-based random streams.
//!
//! Every random number used by an estimator is addressed by the triple
//! `(seed, trial index, tag)`. A trial's draws therefore never depend on which
//! worker evaluates it or in what order, so results are identical for any
//! partition of the trial range.
//!
//! The generator is ChaCha8: the key is derived from the seed, the ChaCha
//! stream id is the trial index and the tag selects a 64-bit word inside the
//! stream.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO_POW_MINUS_53: f64 = 1.0 / 9_007_199_254_740_992.0;

/// Draw slots used by the simulators. Keeping them in one place guarantees
/// that no two dimensions of a trial share a word.
pub mod tag {
    pub const BREAK_POINT: u32 = 0;
    pub const ORIENTATION: u32 = 1;
    pub const SPHERE_Z: u32 = 2;
    pub const SPHERE_AZIMUTH: u32 = 3;
    pub const URN_INDEX: u32 = 4;
    /// Fresh-share-per-term adaptive variant: one breaking point per term.
    pub const TERM_BREAK_POINT: [u32; 4] = [5, 6, 7, 8];
    /// Settings for randomized sweeps.
    pub const SETTING: [u32; 4] = [9, 10, 11, 12];
}

/// Seed-level generator; hands out per-trial streams.
#[derive(Clone, Debug)]
pub struct StreamFactory {
    base: ChaCha8Rng,
}

impl StreamFactory {
    pub fn new(seed: u64) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn trial(&self, index: u64) -> TrialStream {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        TrialStream { rng }
    }
}

/// Random stream of one trial.
#[derive(Clone, Debug)]
pub struct TrialStream {
    rng: ChaCha8Rng,
}

impl TrialStream {
    pub fn word(&mut self, tag: u32) -> u64 {
        self.rng.set_word_pos(u128::from(tag) * 2);
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn unit(&mut self, tag: u32) -> f64 {
        (self.word(tag) >> 11) as f64 * TWO_POW_MINUS_53
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, tag: u32, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit(tag)
    }
}
