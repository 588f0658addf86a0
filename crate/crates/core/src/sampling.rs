//! Seeded sampling of uniform permutations and of their cycle types.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::permutation::{CycleType, Permutation};

/// Number of samples drawn from each substream by [`sample_many`].
pub const CHUNK_SIZE: usize = 1024;

/// ChaCha8 keyed by a 64-bit seed; substreams select the ChaCha stream id.
/// Output depends only on `(seed, stream)` and the call sequence.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent generator for `(seed, index)`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        SeededRng { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform integer in `0..bound`.
    #[inline]
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        self.inner.random_range(0..bound as u64) as usize
    }

    #[inline]
    pub fn unit(&mut self) -> f64 {
        self.inner.random::<f64>()
    }
}

/// Uniform permutation by Fisher–Yates shuffle.
pub fn sample_permutation(n: usize, rng: &mut SeededRng) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i + 1);
        images.swap(i, j);
    }
    Permutation::from_images_unchecked(images)
}

/// Cycle type of a uniform permutation without building the permutation:
/// with `m` points left, the cycle through the smallest of them has length
/// uniform on `1..=m`.
pub fn sample_cycle_type(n: usize, rng: &mut SeededRng) -> CycleType {
    let mut counts = BTreeMap::new();
    let mut remaining = n;
    while remaining > 0 {
        let len = rng.below(remaining) + 1;
        *counts.entry(len).or_insert(0) += 1;
        remaining -= len;
    }
    CycleType::from_map_unchecked(n, counts)
}

/// Draws `count` values, the `i`-th chunk of [`CHUNK_SIZE`] samples coming
/// from substream `i` of `seed`. The result is independent of how many
/// threads run the chunks.
pub fn sample_many<T, F>(seed: u64, count: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SeededRng) -> T + Sync,
{
    let chunks = count.div_ceil(CHUNK_SIZE);
    let run_chunk = |chunk: usize| -> Vec<T> {
        let mut rng = SeededRng::substream(seed, chunk as u64);
        let len = CHUNK_SIZE.min(count - chunk * CHUNK_SIZE);
        (0..len).map(|_| draw(&mut rng)).collect()
    };

    #[cfg(feature = "parallel")]
    let parts: Vec<Vec<T>> = {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(run_chunk).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Vec<T>> = (0..chunks).map(run_chunk).collect();

    parts.into_iter().flatten().collect()
}
