//! Seeded randomness for the tie-breaking and baseline algorithms.
//!
//! The stream is ChaCha8 keyed through `rand_core`'s `seed_from_u64`
//! (PCG32 key expansion). Indices are drawn from raw `u64` words by
//! rejection sampling: with `r = 2^64 mod len`, a word `v` is accepted when
//! `v < 2^64 - r` and mapped to `v mod len`. Both steps are fully specified,
//! so another implementation can reproduce every seeded choice.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct NominationRng {
    inner: ChaCha8Rng,
}

impl NominationRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform index in `0..len`. Panics on `len == 0`.
    pub fn index(&mut self, len: usize) -> usize {
        assert!(len > 0, "cannot draw from an empty set");
        let bound = len as u64;
        let reject = (u64::MAX % bound + 1) % bound;
        loop {
            let v = self.inner.next_u64();
            if reject == 0 || v <= u64::MAX - reject {
                return (v % bound) as usize;
            }
        }
    }

    /// Uniform element of a non-empty slice.
    pub fn choose<T: Copy>(&mut self, items: &[T]) -> T {
        items[self.index(items.len())]
    }

    pub(crate) fn inner_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.inner
    }
}

/// Picks from a non-empty candidate list: the first element without a seed,
/// a seeded uniform draw otherwise.
pub(crate) fn pick(rng: Option<&mut NominationRng>, candidates: &[usize]) -> usize {
    match rng {
        Some(r) => r.choose(candidates),
        None => candidates[0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = NominationRng::new(42);
        let mut b = NominationRng::new(42);
        let xs: Vec<_> = (0..100).map(|_| a.index(7)).collect();
        let ys: Vec<_> = (0..100).map(|_| b.index(7)).collect();
        assert_eq!(xs, ys);
        assert!(xs.iter().all(|&x| x < 7));
    }

    #[test]
    fn every_index_is_reachable() {
        let mut r = NominationRng::new(1);
        let mut hit = [false; 5];
        for _ in 0..500 {
            hit[r.index(5)] = true;
        }
        assert!(hit.iter().all(|&h| h));
        assert_eq!(r.index(1), 0);
    }
}
