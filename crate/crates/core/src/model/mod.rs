//! Ising instances, packed spin states and the Max-Cut mapping.
//!
//! The energy convention is
//! `H(s) = -Σ_{i<j} J_ij s_i s_j - Σ_i h_i s_i`
//! with dense symmetric integer couplings. The dense form is the reference
//! representation every faster path in this crate is checked against.

mod graph;
mod spins;

use thiserror::Error;

pub use graph::{Edge, WeightedGraph};
pub use spins::SpinState;
pub(crate) use spins::word_count;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("instance must have at least one spin")]
    Empty,
    #[error("coupling matrix has {got} entries, expected {expected}")]
    CouplingShape { expected: usize, got: usize },
    #[error("bias vector has {got} entries, expected {expected}")]
    BiasShape { expected: usize, got: usize },
    #[error("coupling matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("coupling matrix has nonzero diagonal at {0}")]
    NonZeroDiagonal(usize),
    #[error("coefficient magnitudes are too large for 64-bit energy accumulators")]
    AccumulatorOverflow,
    #[error("state has {got} spins, instance has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("spin index {index} out of range for {n} spins")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
}

/// Headroom kept below `i64::MAX` so that `ΔE = 2 s u` never overflows.
const ACCUMULATOR_LIMIT: i128 = (i64::MAX / 4) as i128;

/// Dense Ising problem: symmetric zero-diagonal couplings plus biases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsingInstance {
    n: usize,
    couplings: Vec<i64>,
    biases: Vec<i64>,
    label: String,
    total_weight: Option<i64>,
}

impl IsingInstance {
    /// `couplings` is the row-major `n × n` matrix.
    pub fn new(n: usize, couplings: Vec<i64>, biases: Vec<i64>) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::Empty);
        }
        if couplings.len() != n * n {
            return Err(ModelError::CouplingShape { expected: n * n, got: couplings.len() });
        }
        if biases.len() != n {
            return Err(ModelError::BiasShape { expected: n, got: biases.len() });
        }
        let mut budget: i128 = 0;
        for i in 0..n {
            if couplings[i * n + i] != 0 {
                return Err(ModelError::NonZeroDiagonal(i));
            }
            for j in (i + 1)..n {
                let a = couplings[i * n + j];
                if a != couplings[j * n + i] {
                    return Err(ModelError::Asymmetric(i, j));
                }
                budget += (a as i128).abs();
            }
            budget += (biases[i] as i128).abs();
        }
        if budget > ACCUMULATOR_LIMIT {
            return Err(ModelError::AccumulatorOverflow);
        }
        Ok(Self { n, couplings, biases, label: String::new(), total_weight: None })
    }

    /// Builds an instance from sparse upper-triangle entries `(i, j, J_ij)`.
    /// Repeated pairs accumulate.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize, i64)>, biases: Vec<i64>) -> Result<Self, ModelError> {
        let mut couplings = vec![0i64; n * n];
        for (i, j, v) in pairs {
            if i >= n || j >= n {
                return Err(ModelError::IndexOutOfRange { index: i.max(j), n });
            }
            if i == j {
                return Err(ModelError::NonZeroDiagonal(i));
            }
            couplings[i * n + j] += v;
            couplings[j * n + i] += v;
        }
        Self::new(n, couplings, biases)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Row-major dense couplings.
    pub fn couplings(&self) -> &[i64] {
        &self.couplings
    }

    pub fn biases(&self) -> &[i64] {
        &self.biases
    }

    #[inline]
    pub fn coupling(&self, i: usize, j: usize) -> i64 {
        self.couplings[i * self.n + j]
    }

    pub fn bias(&self, i: usize) -> i64 {
        self.biases[i]
    }

    /// Total edge weight of the graph this instance was encoded from.
    pub fn total_weight(&self) -> Option<i64> {
        self.total_weight
    }

    pub fn max_abs_coupling(&self) -> i64 {
        self.couplings.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    fn check_state(&self, s: &SpinState) -> Result<(), ModelError> {
        if s.len() != self.n {
            return Err(ModelError::DimensionMismatch { expected: self.n, got: s.len() });
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<(), ModelError> {
        if i >= self.n {
            return Err(ModelError::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(())
    }

    /// `H(s)` in exact integer arithmetic.
    pub fn energy(&self, s: &SpinState) -> Result<i64, ModelError> {
        self.check_state(s)?;
        let spins: Vec<i64> = s.spins().collect();
        let mut pair = 0i64;
        let mut field = 0i64;
        for i in 0..self.n {
            let row = &self.couplings[i * self.n..(i + 1) * self.n];
            let mut acc = 0i64;
            for j in (i + 1)..self.n {
                acc += row[j] * spins[j];
            }
            pair += acc * spins[i];
            field += self.biases[i] * spins[i];
        }
        Ok(-pair - field)
    }

    /// `u_i = h_i + Σ_{j≠i} J_ij s_j`.
    pub fn local_field(&self, s: &SpinState, i: usize) -> Result<i64, ModelError> {
        self.check_state(s)?;
        self.check_index(i)?;
        let row = &self.couplings[i * self.n..(i + 1) * self.n];
        let coupled: i64 = row.iter().enumerate().map(|(j, &v)| v * s.spin(j)).sum();
        Ok(self.biases[i] + coupled)
    }

    /// `ΔE_i = 2 s_i u_i`, the energy change of flipping spin `i`.
    pub fn flip_delta(&self, s: &SpinState, i: usize) -> Result<i64, ModelError> {
        let u = self.local_field(s, i)?;
        Ok(2 * s.spin(i) * u)
    }

    /// All local fields from scratch, `O(n²)`.
    pub fn local_fields(&self, s: &SpinState) -> Result<Vec<i64>, ModelError> {
        self.check_state(s)?;
        let spins: Vec<i64> = s.spins().collect();
        Ok((0..self.n)
            .map(|i| {
                let row = &self.couplings[i * self.n..(i + 1) * self.n];
                self.biases[i] + row.iter().zip(&spins).map(|(a, b)| a * b).sum::<i64>()
            })
            .collect())
    }

    /// Arithmetic right shift of every coefficient by `bits`
    /// (floor division by `2^bits`).
    pub fn quantize_shift(&self, bits: u32) -> IsingInstance {
        let shift = |v: i64| if bits >= 63 { v >> 63 } else { v >> bits };
        IsingInstance {
            n: self.n,
            couplings: self.couplings.iter().map(|&v| shift(v)).collect(),
            biases: self.biases.iter().map(|&v| shift(v)).collect(),
            label: self.label.clone(),
            total_weight: None,
        }
    }
}

/// Max-Cut as Ising: `J_ij = -w_ij`, `h = 0`, so `cut = (W_tot - H) / 2`.
pub fn maxcut_encode(g: &WeightedGraph) -> Result<IsingInstance, ModelError> {
    let pairs = g.edges().iter().map(|e| (e.i, e.j, -e.weight));
    let mut inst = IsingInstance::from_pairs(g.n_vertices(), pairs, vec![0; g.n_vertices()])?;
    inst.total_weight = Some(g.total_weight());
    Ok(inst)
}

/// Total weight of edges whose endpoints carry different spins.
pub fn cut_value(g: &WeightedGraph, s: &SpinState) -> Result<i64, ModelError> {
    if s.len() != g.n_vertices() {
        return Err(ModelError::DimensionMismatch { expected: g.n_vertices(), got: s.len() });
    }
    Ok(g.edges().iter().filter(|e| s.bit(e.i) != s.bit(e.j)).map(|e| e.weight).sum())
}

/// Cut weight implied by an energy under [`maxcut_encode`].
pub fn cut_from_energy(total_weight: i64, energy: i64) -> i64 {
    (total_weight - energy) / 2
}

/// Five-spin all-to-all demonstration instance.
///
/// Its unique ground state is `(+1, +1, -1, +1, -1)` with coupling energy
/// `-14` and field energy `-10`, total `-24`.
pub fn k5_demo() -> IsingInstance {
    let pairs = [
        (0, 1, 3),
        (0, 2, -1),
        (0, 3, 2),
        (0, 4, -1),
        (1, 2, -1),
        (1, 3, 2),
        (1, 4, -1),
        (2, 3, -1),
        (2, 4, 1),
        (3, 4, -1),
    ];
    IsingInstance::from_pairs(5, pairs, vec![2, 3, -2, 1, -2])
        .expect("static instance is valid")
        .with_label("K5")
}
