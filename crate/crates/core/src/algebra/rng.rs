//! Small deterministic random generator for sampling rational test points.
//!
//! The generator is a splitmix64 stream: pure wrapping integer arithmetic,
//! so the sequence is identical on every platform and fully determined by
//! the seed. It is used only to pick evaluation points for numeric
//! spot-checks; nothing about the mathematics depends on it.

use alloc::vec::Vec;

use crate::algebra::rat::Rat;

/// Deterministic splitmix64 stream.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// A value in `0..bound` (`bound` must be positive).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        self.next_u64() % bound
    }

    /// A small rational with numerator in `[-97, 97]` and denominator in
    /// `[1, 97]`.
    pub fn rat(&mut self) -> Rat {
        let num = self.below(195) as i64 - 97;
        let den = self.below(97) as i64 + 1;
        Rat::new(num, den).expect("denominator is positive")
    }

    /// A rational point with `n` entries.
    pub fn point(&mut self, n: usize) -> Vec<Rat> {
        (0..n).map(|_| self.rat()).collect()
    }

    /// A nonzero small rational.
    pub fn nonzero_rat(&mut self) -> Rat {
        loop {
            let r = self.rat();
            if !r.is_zero() {
                return r;
            }
        }
    }
}
