//! Stateless counter-based random numbers.
//!
//! Every variate is a pure function of a 64-bit seed and a small index
//! tuple: annealing stage `k`, iteration `t` and a purpose salt `r`. The
//! tuple is packed as `k` in bits 48..64, `t` in bits 8..48 and `r` in
//! bits 0..8, xored with the mixed seed and passed through the SplitMix64
//! finalizer. The upper 32 bits of the result are the output.
//!
//! This layout is frozen: changing it changes every trajectory.

use std::num::ParseIntError;

/// Purpose salt separating independent streams drawn at the same `(k, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Salt {
    SiteSelect = 0,
    AcceptTest = 1,
    RouletteDraw = 2,
    Uniformize = 3,
    InitialState = 4,
    Instance = 5,
}

/// Index tuple identifying one variate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RandomContext {
    pub seed: u64,
    pub stage: u64,
    pub iteration: u64,
    pub salt: Salt,
}

impl RandomContext {
    pub fn new(seed: u64, stage: u64, iteration: u64, salt: Salt) -> Self {
        Self { seed, stage, iteration, salt }
    }

    /// `k` in bits 48..64, `t` in bits 8..48, `r` in bits 0..8.
    /// Indices wider than their field are truncated.
    pub fn packed(&self) -> u64 {
        ((self.stage & 0xFFFF) << 48) | ((self.iteration & 0xFF_FFFF_FFFF) << 8) | self.salt as u64
    }
}

/// SplitMix64 output function (golden-ratio increment then finalizer).
#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform 32-bit integer for `ctx`.
#[inline]
pub fn draw_u32(ctx: RandomContext) -> u32 {
    // The seed is mixed before combining so that nearby seeds (seed + run
    // offset) never alias the salt or iteration bits of one another.
    (mix64(mix64(ctx.seed) ^ ctx.packed()) >> 32) as u32
}

/// `floor(u n / 2^32)`, uniform over `0..n` when `u` is uniform.
#[inline]
pub fn site_index(u: u32, n: usize) -> usize {
    debug_assert!(n >= 1);
    ((u as u128 * n as u128) >> 32) as usize
}

/// `u / 2^32 ∈ [0, 1)`.
#[inline]
pub fn unit_uniform(u: u32) -> f64 {
    u as f64 * (1.0 / 4_294_967_296.0)
}

/// Parses a seed written in decimal or as a `0x` hex literal.
pub fn parse_seed(text: &str) -> Result<u64, ParseIntError> {
    let t = text.trim();
    match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    }
}
