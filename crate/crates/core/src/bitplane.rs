//! Signed bit-plane coupling storage and local-field maintenance.
//!
//! A coupling is split into sign and magnitude,
//! `J_ij = Σ_b 2^b (B⁺_b(i,j) - B⁻_b(i,j))`, and every plane is stored as
//! packed 64-bit words twice: row-major for the Hamming-weight field
//! initialization and column-major for the per-flip column scan.
//!
//! Encoding is canonical sign-magnitude: a pair never has bits set in both
//! the positive and the negative planes.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::model::{word_count, IsingInstance, SpinState};

pub const MAX_PLANES: u32 = 32;

/// Magic prefix of the debug plane dump.
pub const DUMP_MAGIC: &[u8; 8] = b"SBPLANE1";

#[derive(Debug, Error)]
pub enum BitPlaneError {
    #[error("plane count {0} outside 1..={MAX_PLANES}")]
    PlaneCount(u32),
    #[error("coupling J[{i}][{j}] = {value} does not fit in {planes} magnitude planes")]
    Overflow { i: usize, j: usize, value: i64, planes: u32 },
    #[error("coupling matrix has {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error("coupling matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("coupling matrix has nonzero diagonal at {0}")]
    NonZeroDiagonal(usize),
    #[error("state or bias length {got} does not match {expected} spins")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("spin index {index} out of range for {n} spins")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("pre-flip spin must be -1 or +1, got {0}")]
    InvalidSpin(i64),
    #[error("plane dump: {0}")]
    Dump(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Dense couplings as `B` signed magnitude planes in two word layouts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitPlaneMatrix {
    n: usize,
    planes: u32,
    words: usize,
    row_pos: Vec<u64>,
    row_neg: Vec<u64>,
    col_pos: Vec<u64>,
    col_neg: Vec<u64>,
}

impl BitPlaneMatrix {
    /// Encodes a symmetric zero-diagonal row-major `n × n` matrix.
    pub fn encode(n: usize, couplings: &[i64], planes: u32) -> Result<Self, BitPlaneError> {
        if planes == 0 || planes > MAX_PLANES {
            return Err(BitPlaneError::PlaneCount(planes));
        }
        if couplings.len() != n * n {
            return Err(BitPlaneError::Shape { expected: n * n, got: couplings.len() });
        }
        let limit = (1i64 << planes) - 1;
        for i in 0..n {
            if couplings[i * n + i] != 0 {
                return Err(BitPlaneError::NonZeroDiagonal(i));
            }
            for j in 0..n {
                let v = couplings[i * n + j];
                if v != couplings[j * n + i] {
                    return Err(BitPlaneError::Asymmetric(i.min(j), i.max(j)));
                }
                if v.unsigned_abs() > limit as u64 {
                    return Err(BitPlaneError::Overflow { i, j, value: v, planes });
                }
            }
        }

        let words = word_count(n);
        let size = planes as usize * n * words;
        let mut m = Self {
            n,
            planes,
            words,
            row_pos: vec![0; size],
            row_neg: vec![0; size],
            col_pos: vec![0; size],
            col_neg: vec![0; size],
        };
        for i in 0..n {
            for j in 0..n {
                let v = couplings[i * n + j];
                if v == 0 {
                    continue;
                }
                let mag = v.unsigned_abs();
                let (row, col) = if v > 0 {
                    (&mut m.row_pos, &mut m.col_pos)
                } else {
                    (&mut m.row_neg, &mut m.col_neg)
                };
                for b in 0..planes as usize {
                    if (mag >> b) & 1 == 1 {
                        // Row-major: line i, column bit j. Column-major: line j, row bit i.
                        row[(b * n + i) * words + j / 64] |= 1 << (j % 64);
                        col[(b * n + j) * words + i / 64] |= 1 << (i % 64);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn from_instance(inst: &IsingInstance, planes: u32) -> Result<Self, BitPlaneError> {
        Self::encode(inst.n(), inst.couplings(), planes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn planes(&self) -> u32 {
        self.planes
    }

    /// Words per packed line, `ceil(n / 64)`.
    pub fn words_per_line(&self) -> usize {
        self.words
    }

    #[inline]
    fn line(&self, b: usize, i: usize) -> std::ops::Range<usize> {
        let start = (b * self.n + i) * self.words;
        start..start + self.words
    }

    /// Row-major `(B⁺_b, B⁻_b)` words of row `i`.
    pub fn row_words(&self, plane: u32, i: usize) -> (&[u64], &[u64]) {
        let r = self.line(plane as usize, i);
        (&self.row_pos[r.clone()], &self.row_neg[r])
    }

    /// Column-major `(B⁺ᵀ_b, B⁻ᵀ_b)` words of column `j`.
    pub fn col_words(&self, plane: u32, j: usize) -> (&[u64], &[u64]) {
        let r = self.line(plane as usize, j);
        (&self.col_pos[r.clone()], &self.col_neg[r])
    }

    fn read_coupling(pos: &[u64], neg: &[u64], m: &Self, line: usize, other: usize) -> i64 {
        let mut v = 0i64;
        for b in 0..m.planes as usize {
            let idx = (b * m.n + line) * m.words + other / 64;
            let bit = 1u64 << (other % 64);
            if pos[idx] & bit != 0 {
                v += 1 << b;
            }
            if neg[idx] & bit != 0 {
                v -= 1 << b;
            }
        }
        v
    }

    /// `J_ij` read from the row-major layout.
    pub fn coupling(&self, i: usize, j: usize) -> i64 {
        Self::read_coupling(&self.row_pos, &self.row_neg, self, i, j)
    }

    /// `J_ij` read from the column-major layout, i.e. entry `(j, i)` of the
    /// transposed planes.
    pub fn coupling_from_columns(&self, i: usize, j: usize) -> i64 {
        Self::read_coupling(&self.col_pos, &self.col_neg, self, j, i)
    }

    /// Dense row-major reconstruction.
    pub fn decode(&self) -> Vec<i64> {
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for b in 0..self.planes as usize {
            let w_b = 1i64 << b;
            for i in 0..n {
                let r = self.line(b, i);
                for (w, (&p, &q)) in self.row_pos[r.clone()].iter().zip(&self.row_neg[r]).enumerate() {
                    for_each_set_bit(p, |bit| out[i * n + w * 64 + bit] += w_b);
                    for_each_set_bit(q, |bit| out[i * n + w * 64 + bit] -= w_b);
                }
            }
        }
        out
    }

    /// True when no pair has both a positive and a negative bit, the
    /// diagonal is empty and the column layout is the exact transpose of
    /// the row layout.
    pub fn is_canonical(&self) -> bool {
        let n = self.n;
        let mut sign = vec![0i8; n * n];
        for b in 0..self.planes as usize {
            for i in 0..n {
                for j in 0..n {
                    let idx = (b * n + i) * self.words + j / 64;
                    let bit = 1u64 << (j % 64);
                    let p = self.row_pos[idx] & bit != 0;
                    let q = self.row_neg[idx] & bit != 0;
                    let tidx = (b * n + j) * self.words + i / 64;
                    let tbit = 1u64 << (i % 64);
                    if p != (self.col_pos[tidx] & tbit != 0) || q != (self.col_neg[tidx] & tbit != 0) {
                        return false;
                    }
                    if (p || q) && i == j {
                        return false;
                    }
                    let s = match (p, q) {
                        (true, true) => return false,
                        (true, false) => 1,
                        (false, true) => -1,
                        (false, false) => continue,
                    };
                    if sign[i * n + j] == -s {
                        return false;
                    }
                    sign[i * n + j] = s;
                }
            }
        }
        true
    }

    /// Coupler-induced fields `u^(J) = J s` from Hamming weights.
    ///
    /// For each row, plane and word the positive and negative coupler words
    /// give `m = popcount(word)` and `o = popcount(word & x)`; the
    /// contribution is `2^b (2 o⁺ - m⁺) - 2^b (2 o⁻ - m⁻)`.
    pub fn init_local_fields(&self, s: &SpinState, biases: &[i64]) -> Result<LocalFieldVector, BitPlaneError> {
        if s.len() != self.n {
            return Err(BitPlaneError::DimensionMismatch { expected: self.n, got: s.len() });
        }
        if biases.len() != self.n {
            return Err(BitPlaneError::DimensionMismatch { expected: self.n, got: biases.len() });
        }
        let mut coupler = vec![0i64; self.n];
        let x = s.words();
        for b in 0..self.planes as usize {
            let w_b = 1i64 << b;
            for (i, u) in coupler.iter_mut().enumerate() {
                let r = self.line(b, i);
                let mut acc = 0i64;
                for ((&p, &q), &xw) in self.row_pos[r.clone()].iter().zip(&self.row_neg[r]).zip(x) {
                    let m_p = p.count_ones() as i64;
                    let o_p = (p & xw).count_ones() as i64;
                    let m_n = q.count_ones() as i64;
                    let o_n = (q & xw).count_ones() as i64;
                    acc += (2 * o_p - m_p) - (2 * o_n - m_n);
                }
                *u += w_b * acc;
            }
        }
        Ok(LocalFieldVector {
            coupler,
            biases: biases.to_vec(),
            word_reads: 2 * self.planes as u64 * self.n as u64 * self.words as u64,
        })
    }

    /// Applies `u_i^(J) -= 2 J_ij s_j_old` for every `i` by scanning column
    /// `j` of the column-major planes.
    pub fn incremental_update(&self, lfv: &mut LocalFieldVector, j: usize, s_j_old: i64) -> Result<(), BitPlaneError> {
        if j >= self.n {
            return Err(BitPlaneError::IndexOutOfRange { index: j, n: self.n });
        }
        if s_j_old != 1 && s_j_old != -1 {
            return Err(BitPlaneError::InvalidSpin(s_j_old));
        }
        if lfv.coupler.len() != self.n {
            return Err(BitPlaneError::DimensionMismatch { expected: self.n, got: lfv.coupler.len() });
        }
        self.apply_column(lfv, j, s_j_old);
        Ok(())
    }

    /// Unchecked column update used by the engine hot loop.
    #[inline]
    pub(crate) fn apply_column(&self, lfv: &mut LocalFieldVector, j: usize, s_j_old: i64) {
        let u = &mut lfv.coupler;
        for b in 0..self.planes as usize {
            let delta = 2 * (1i64 << b) * s_j_old;
            let r = self.line(b, j);
            for (w, (&p, &q)) in self.col_pos[r.clone()].iter().zip(&self.col_neg[r]).enumerate() {
                let base = w * 64;
                for_each_set_bit(p, |bit| u[base + bit] -= delta);
                for_each_set_bit(q, |bit| u[base + bit] += delta);
            }
        }
        lfv.word_reads += 2 * self.planes as u64 * self.words as u64;
    }

    /// Writes the row-major planes: magic, `n` (u64), `B` (u32), then for
    /// each plane in ascending order the positive then negative words,
    /// all little-endian. Debugging aid, not a stable format.
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<(), BitPlaneError> {
        out.write_all(DUMP_MAGIC)?;
        out.write_all(&(self.n as u64).to_le_bytes())?;
        out.write_all(&self.planes.to_le_bytes())?;
        let plane_len = self.n * self.words;
        for b in 0..self.planes as usize {
            for src in [&self.row_pos, &self.row_neg] {
                for w in &src[b * plane_len..(b + 1) * plane_len] {
                    out.write_all(&w.to_le_bytes())?;
                }
            }
        }
        Ok(())
    }

    /// Reads a dump written by [`BitPlaneMatrix::write_dump`].
    pub fn read_dump<R: Read>(mut input: R) -> Result<Self, BitPlaneError> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != DUMP_MAGIC {
            return Err(BitPlaneError::Dump("bad magic".into()));
        }
        let mut b8 = [0u8; 8];
        let mut b4 = [0u8; 4];
        input.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8) as usize;
        input.read_exact(&mut b4)?;
        let planes = u32::from_le_bytes(b4);
        if planes == 0 || planes > MAX_PLANES {
            return Err(BitPlaneError::PlaneCount(planes));
        }
        let words = word_count(n);
        let plane_len = n * words;
        let mut row_pos = vec![0u64; planes as usize * plane_len];
        let mut row_neg = vec![0u64; planes as usize * plane_len];
        for b in 0..planes as usize {
            for dst in [&mut row_pos, &mut row_neg] {
                for w in &mut dst[b * plane_len..(b + 1) * plane_len] {
                    input.read_exact(&mut b8)?;
                    *w = u64::from_le_bytes(b8);
                }
            }
        }
        let mut m = Self {
            n,
            planes,
            words,
            col_pos: vec![0; row_pos.len()],
            col_neg: vec![0; row_neg.len()],
            row_pos,
            row_neg,
        };
        for b in 0..planes as usize {
            for i in 0..n {
                let r = m.line(b, i);
                for w in 0..words {
                    let (p, q) = (m.row_pos[r.start + w], m.row_neg[r.start + w]);
                    for_each_set_bit(p, |bit| m.col_pos[(b * n + w * 64 + bit) * words + i / 64] |= 1 << (i % 64));
                    for_each_set_bit(q, |bit| m.col_neg[(b * n + w * 64 + bit) * words + i / 64] |= 1 << (i % 64));
                }
            }
        }
        if !m.is_canonical() {
            return Err(BitPlaneError::Dump("planes are not canonical sign-magnitude".into()));
        }
        Ok(m)
    }
}

#[inline]
fn for_each_set_bit(mut word: u64, mut f: impl FnMut(usize)) {
    while word != 0 {
        f(word.trailing_zeros() as usize);
        word &= word - 1;
    }
}

/// Coupler-induced fields `u_i^(J)` plus a copy of the biases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFieldVector {
    coupler: Vec<i64>,
    biases: Vec<i64>,
    word_reads: u64,
}

impl LocalFieldVector {
    /// `u_i^(J) = Σ_j J_ij s_j`.
    pub fn coupler(&self) -> &[i64] {
        &self.coupler
    }

    pub fn biases(&self) -> &[i64] {
        &self.biases
    }

    /// Full field `u_i = u_i^(J) + h_i`.
    #[inline]
    pub fn field(&self, i: usize) -> i64 {
        self.coupler[i] + self.biases[i]
    }

    pub fn len(&self) -> usize {
        self.coupler.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coupler.is_empty()
    }

    /// Coupler words read so far (initialization plus every update).
    pub fn word_reads(&self) -> u64 {
        self.word_reads
    }

    /// Field equality ignoring the operation counter.
    pub fn same_fields(&self, other: &Self) -> bool {
        self.coupler == other.coupler && self.biases == other.biases
    }
}
