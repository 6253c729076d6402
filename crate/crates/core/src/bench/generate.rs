//! Synthetic instances: random complete graphs, planted grids and a
//! high-precision planted landscape.

use crate::model::{cut_value, IsingInstance, SpinState, WeightedGraph};
use crate::rng::{draw_u32, RandomContext, Salt};

use super::BenchError;

/// Complete graph with `±1` weights drawn from the stateless generator.
/// Edges are listed in `(i, j)` lexicographic order, `i < j`.
pub fn gen_complete_random(n: usize, seed: u64) -> Result<WeightedGraph, BenchError> {
    if n < 2 {
        return Err(BenchError::InvalidInput(format!("complete graph needs at least 2 vertices, got {n}")));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    let mut k = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let u = draw_u32(RandomContext::new(seed, 0, k, Salt::Instance));
            edges.push((i, j, if u >> 31 == 1 { 1 } else { -1 }));
            k += 1;
        }
    }
    Ok(WeightedGraph::new(n, edges)?)
}

/// Row-major boolean image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitmap {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl Bitmap {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self, BenchError> {
        if rows == 0 || cols == 0 || bits.len() != rows * cols {
            return Err(BenchError::InvalidInput(format!(
                "bitmap of {} bits does not match {rows}x{cols}",
                bits.len()
            )));
        }
        Ok(Self { rows, cols, bits })
    }

    /// One row per non-empty line; `1`, `#`, `X` are set, `0`, `.`, `_`
    /// and spaces are clear.
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let mut bits = Vec::new();
        let mut rows = 0;
        let mut cols = None;
        for (k, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let row: Vec<bool> = line
                .chars()
                .map(|c| match c {
                    '1' | '#' | 'X' | 'x' => Ok(true),
                    '0' | '.' | '_' | ' ' => Ok(false),
                    other => Err(BenchError::Parse { line: k + 1, message: format!("unexpected bitmap character {other:?}") }),
                })
                .collect::<Result<_, _>>()?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(BenchError::Parse { line: k + 1, message: format!("row has {} cells, expected {c}", row.len()) })
                }
                _ => {}
            }
            bits.extend(row);
            rows += 1;
        }
        Self::new(rows, cols.unwrap_or(0), bits)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// Grid graph whose maximum cut is the planted bitmap.
#[derive(Clone, Debug)]
pub struct PlantedGrid {
    pub graph: WeightedGraph,
    pub planted: SpinState,
    pub planted_cut: i64,
}

/// Four-neighbour grid over the bitmap. An edge between pixels that differ
/// gets weight `+1` and an edge between equal pixels gets `-1`, so every
/// edge is satisfied by the bitmap and it attains the maximum cut (unique
/// up to a global flip).
pub fn gen_planted_grid(bitmap: &Bitmap) -> Result<PlantedGrid, BenchError> {
    if bitmap.rows * bitmap.cols < 2 {
        return Err(BenchError::InvalidInput("planted grid needs at least two pixels".into()));
    }
    let idx = |r: usize, c: usize| r * bitmap.cols + c;
    let mut edges = Vec::new();
    for r in 0..bitmap.rows {
        for c in 0..bitmap.cols {
            let here = bitmap.get(r, c);
            let mut link = |r2: usize, c2: usize| {
                let w = if here != bitmap.get(r2, c2) { 1 } else { -1 };
                edges.push((idx(r, c), idx(r2, c2), w));
            };
            if c + 1 < bitmap.cols {
                link(r, c + 1);
            }
            if r + 1 < bitmap.rows {
                link(r + 1, c);
            }
        }
    }
    let graph = WeightedGraph::new(bitmap.rows * bitmap.cols, edges)?;
    let planted = SpinState::from_bits(bitmap.bits());
    let planted_cut = cut_value(&graph, &planted)?;
    Ok(PlantedGrid { graph, planted, planted_cut })
}

/// Planted square lattice whose coefficients span a full `bits`-bit range.
#[derive(Clone, Debug)]
pub struct PlantedLandscape {
    pub instance: IsingInstance,
    pub target: SpinState,
    pub side: usize,
    pub bits: u32,
}

/// `side × side` lattice with a smooth target sign pattern.
///
/// Every site gets a bias `h_i = t_i m_i` and every lattice bond a coupling
/// `J_ij = t_i t_j w_ij`, where `t` is the target. Field magnitudes `m` are
/// drawn log-uniformly from `1..2^bits` with the stateless generator so that
/// all bit planes are populated. Bond magnitudes are drawn the same way but
/// capped at `min(m_i, m_j)`: no pair of sites is bound more tightly than
/// its fields pull it towards the target, which keeps the landscape free of
/// clusters that freeze before their fields can orient them. The target
/// satisfies every term, so it is the unique ground state.
pub fn gen_precision_landscape(side: usize, bits: u32, seed: u64) -> Result<PlantedLandscape, BenchError> {
    if side < 2 || !(1..=30).contains(&bits) {
        return Err(BenchError::InvalidInput("landscape needs side >= 2 and 1..=30 bits".into()));
    }
    let n = side * side;
    let mut counter = 0u64;
    // Log-uniform in 1..2^max_bits: uniform bit width, then uniform value.
    let mut magnitude = |max_bits: u32| {
        counter += 1;
        let a = draw_u32(RandomContext::new(seed, 1, counter, Salt::Instance));
        let b = draw_u32(RandomContext::new(seed, 2, counter, Salt::Instance));
        let width = 1 + ((a as u64 * max_bits as u64) >> 32) as u32;
        let lo = 1i64 << (width - 1);
        lo + (b as i64 % lo)
    };
    let target: Vec<i8> = (0..n)
        .map(|k| {
            let (r, c) = ((k / side) as f64, (k % side) as f64);
            let s = side as f64;
            let wave = (2.0 * std::f64::consts::PI * r / s).sin() + (3.0 * std::f64::consts::PI * c / s).cos() + 0.3;
            if wave > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    let fields: Vec<i64> = (0..n).map(|_| magnitude(bits)).collect();
    let mut pairs = Vec::new();
    for r in 0..side {
        for c in 0..side {
            let i = r * side + c;
            for j in [(c + 1 < side).then(|| i + 1), (r + 1 < side).then(|| i + side)].into_iter().flatten() {
                let cap = fields[i].min(fields[j]);
                let w = magnitude(64 - cap.leading_zeros()).min(cap);
                pairs.push((i, j, (target[i] * target[j]) as i64 * w));
            }
        }
    }
    let biases = (0..n).map(|i| target[i] as i64 * fields[i]).collect();
    let instance = IsingInstance::from_pairs(n, pairs, biases)?.with_label(format!("landscape{side}x{side}-{bits}bit"));
    Ok(PlantedLandscape { instance, target: SpinState::from_spins(&target), side, bits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_counts_and_determinism() {
        let g = gen_complete_random(50, 9).unwrap();
        assert_eq!(g.edge_count(), 50 * 49 / 2);
        assert_eq!(g, gen_complete_random(50, 9).unwrap());
        assert_ne!(g, gen_complete_random(50, 10).unwrap());
        assert!(g.edges().iter().all(|e| e.weight == 1 || e.weight == -1));
        assert!(gen_complete_random(1, 0).is_err());
    }

    #[test]
    fn two_pixel_grid_separates_different_pixels() {
        let b = Bitmap::new(1, 2, vec![false, true]).unwrap();
        let p = gen_planted_grid(&b).unwrap();
        assert_eq!(p.graph.edge_count(), 1);
        assert_eq!(p.graph.edges()[0].weight, 1);
        assert_eq!(p.planted_cut, 1);
        assert!(gen_planted_grid(&Bitmap::new(1, 1, vec![true]).unwrap()).is_err());
    }

    #[test]
    fn bitmap_text() {
        let b = Bitmap::parse("#.#\n.#.\n").unwrap();
        assert_eq!((b.rows(), b.cols()), (2, 3));
        assert!(b.get(0, 0) && !b.get(0, 1) && b.get(1, 1));
        assert!(Bitmap::parse("##\n#\n").is_err());
        assert!(Bitmap::parse("").is_err());
        assert!(Bitmap::parse("#?").is_err());
    }

    #[test]
    fn landscape_spans_requested_bits() {
        let l = gen_precision_landscape(8, 16, 3).unwrap();
        let max_h = l.instance.biases().iter().map(|h| h.abs()).max().unwrap();
        let max_j = l.instance.max_abs_coupling();
        assert!(max_h < 1 << 16 && max_j < 1 << 16);
        assert!(max_h >= 1 << 15);
        assert!(max_j >= 1 << 8);
        for i in 0..64 {
            for j in 0..64 {
                let cap = l.instance.bias(i).abs().min(l.instance.bias(j).abs());
                assert!(l.instance.coupling(i, j).abs() <= cap);
            }
        }
        assert!(l.instance.biases().iter().any(|h| h.abs() < 4));
        let e = l.instance.energy(&l.target).unwrap();
        let expect: i64 = -l.instance.biases().iter().map(|h| h.abs()).sum::<i64>()
            - l.instance.couplings().iter().map(|j| j.abs()).sum::<i64>() / 2;
        assert_eq!(e, expect);
    }
}
