//! Seeded random stream shared by every stochastic operator of a run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A seedable, platform-independent random stream.
///
/// Backed by ChaCha8 so that the same seed and the same sequence of draws
/// give bit-identical results on every target.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform draw on the open interval `(0, 1)`; exact zeros are redrawn.
    pub fn open_unit(&mut self) -> f64 {
        loop {
            let r = self.inner.gen::<f64>();
            if r > 0.0 {
                return r;
            }
        }
    }

    /// Uniform index in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "cannot draw an index from an empty range");
        self.inner.gen_range(0..n)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.gen::<u64>()
    }
}
