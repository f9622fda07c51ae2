//! Named, value-passed random streams.
//!
//! A stream is identified by a master seed plus any number of
//! `(purpose tag, index)` derivations, so every subsample and every
//! training run can be reproduced in isolation, independent of the order
//! in which tasks execute.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomStream {
    key: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

impl RandomStream {
    pub fn new(master_seed: u64) -> Self {
        RandomStream {
            key: splitmix64(master_seed),
        }
    }

    /// Child stream for `(tag, index)`. Distinct tags or indices give
    /// statistically independent streams.
    pub fn derive(&self, tag: &str, index: u64) -> Self {
        let mixed = splitmix64(self.key ^ fnv1a(tag.as_bytes()));
        RandomStream {
            key: splitmix64(mixed ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d))),
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key)
    }

    pub fn key(&self) -> u64 {
        self.key
    }
}
