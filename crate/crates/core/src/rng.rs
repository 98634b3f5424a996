//! Reproducible random streams.
//!
//! Every experiment takes one 64-bit master seed. Work items draw from
//! ChaCha streams addressed by `(seed, stream index)`, so results do not
//! depend on how many threads share the work or in which order items run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The random generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// A master seed from which independent, addressable sub-streams are derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn new(value: u64) -> Self {
        Seed(value)
    }

    /// Generator for stream `index` of this seed.
    pub fn stream(self, index: u64) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }

    /// A derived seed for a named sub-experiment.
    ///
    /// Mixing is a splitmix64 finalizer over `(seed, tag)`; distinct tags give
    /// unrelated stream families.
    pub fn derive(self, tag: u64) -> Seed {
        let mut z = self
            .0
            .wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
            .wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

impl From<u64> for Seed {
    fn from(value: u64) -> Self {
        Seed(value)
    }
}
