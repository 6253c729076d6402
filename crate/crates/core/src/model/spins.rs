use std::fmt;

use crate::rng::{draw_u32, RandomContext, Salt};

/// Spin configuration packed 64 spins per word.
///
/// Bit `j` of word `w` holds `x_(64w+j)`, and the spin value is
/// `s = 2x - 1`. Padding bits above `n` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpinState {
    n: usize,
    words: Vec<u64>,
}

pub(crate) fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl SpinState {
    /// All spins down (`x = 0`).
    pub fn all_down(n: usize) -> Self {
        Self { n, words: vec![0; word_count(n)] }
    }

    /// All spins up (`x = 1`).
    pub fn all_up(n: usize) -> Self {
        let mut s = Self::all_down(n);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.clear_padding();
        s
    }

    /// Builds a state from `±1` spin values. Any positive value is read as up.
    pub fn from_spins(spins: &[i8]) -> Self {
        let mut s = Self::all_down(spins.len());
        for (i, &v) in spins.iter().enumerate() {
            if v > 0 {
                s.words[i / 64] |= 1 << (i % 64);
            }
        }
        s
    }

    /// Builds a state from `x` bits.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::all_down(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.words[i / 64] |= 1 << (i % 64);
            }
        }
        s
    }

    /// Configuration with index `index`: bit `i` of the index is `x_i`.
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(n <= 64, "configuration index only addresses up to 64 spins");
        let mut s = Self::all_down(n);
        if n > 0 {
            s.words[0] = index;
            s.clear_padding();
        }
        s
    }

    /// Inverse of [`SpinState::from_index`].
    pub fn to_index(&self) -> u64 {
        assert!(self.n <= 64, "configuration index only addresses up to 64 spins");
        self.words.first().copied().unwrap_or(0)
    }

    /// Uniformly random state, a pure function of `seed`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut s = Self::all_down(n);
        for i in 0..n {
            let u = draw_u32(RandomContext::new(seed, 0, i as u64, Salt::InitialState));
            if u >> 31 == 1 {
                s.words[i / 64] |= 1 << (i % 64);
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// `x_i ∈ {0, 1}`.
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.n);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// `s_i ∈ {-1, +1}`.
    #[inline]
    pub fn spin(&self, i: usize) -> i64 {
        if self.bit(i) {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.n, "spin index {i} out of range for {} spins", self.n);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// Copy of `self` with spin `i` flipped.
    pub fn flipped(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.flip(i);
        s
    }

    /// Copy with every spin reversed.
    pub fn global_flip(&self) -> Self {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.clear_padding();
        s
    }

    pub fn spins(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.n).map(|i| self.spin(i))
    }

    /// Number of positions where the two states differ.
    pub fn hamming_distance(&self, other: &Self) -> u32 {
        assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones()).sum()
    }

    /// Number of up spins.
    pub fn count_up(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn clear_padding(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for SpinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinState(")?;
        for i in 0..self.n {
            f.write_str(if self.bit(i) { "+" } else { "-" })?;
        }
        write!(f, ")")
    }
}
