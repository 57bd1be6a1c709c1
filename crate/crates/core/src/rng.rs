//! Seeded, platform-independent randomness.
//!
//! Streams come from ChaCha20 keyed by `seed_from_u64`. A child stream for
//! replicate `k` is the same key with stream id `k + 1`, so it depends only
//! on `(master seed, k)` and never on scheduling. Integer draws use plain
//! rejection sampling on raw 64-bit words; nothing depends on `usize` width.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Number of bits in the lattice used for the uniform variable `U`.
pub const UNIFORM_BITS: u32 = 53;

#[derive(Clone, Debug)]
pub struct SeededSource {
    seed: u64,
    stream: u64,
    rng: ChaCha20Rng,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        SeededSource {
            seed,
            stream: 0,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for replicate `index` of a run seeded by `master`.
    pub fn child(master: u64, index: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(master);
        let stream = index.wrapping_add(1);
        rng.set_stream(stream);
        SeededSource {
            seed: master,
            stream,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform integer in `0..bound`. `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        // Largest multiple of `bound` that fits; reject the ragged tail.
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % bound;
            }
        }
    }

    pub fn below_u128(&mut self, bound: u128) -> u128 {
        assert!(bound > 0, "empty range");
        if let Ok(small) = u64::try_from(bound) {
            return self.below(small) as u128;
        }
        let zone = u128::MAX - (u128::MAX % bound + 1) % bound;
        loop {
            let x = ((self.next_u64() as u128) << 64) | self.next_u64() as u128;
            if x <= zone {
                return x % bound;
            }
        }
    }

    /// Numerator `k` of a uniform draw `U = k / 2^53`.
    pub fn uniform_numerator(&mut self) -> u64 {
        self.next_u64() >> (64 - UNIFORM_BITS)
    }
}
