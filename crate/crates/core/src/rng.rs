//! Seeded, splittable randomness.
//!
//! Every randomized routine draws from a ChaCha8 stream selected by a
//! `(seed, trial)` pair, so a batch of trials produces the same results no
//! matter how it is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrialSeed {
    pub seed: u64,
    pub trial: u64,
}

impl TrialSeed {
    pub fn new(seed: u64, trial: u64) -> Self {
        TrialSeed { seed, trial }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        trial_rng(self.seed, self.trial)
    }
}

impl From<u64> for TrialSeed {
    fn from(seed: u64) -> Self {
        TrialSeed { seed, trial: 0 }
    }
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
