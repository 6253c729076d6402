//! Exhaustive reference computations for small instances.
//!
//! Configurations are indexed little-endian: bit `i` of the index is
//! `x_i`. Everything here works on the dense instance and never touches the
//! bit-plane or engine code paths, so it can serve as an independent check
//! on them.

use std::collections::VecDeque;

use thiserror::Error;

use crate::model::{IsingInstance, SpinState};
use crate::num::{CompensatedSum, Real};

pub const MAX_GROUND_SPINS: usize = 24;
pub const MAX_GIBBS_SPINS: usize = 16;
pub const MAX_KERNEL_SPINS: usize = 12;
pub const MAX_SYNC_KERNEL_SPINS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{n} spins exceeds the exhaustive limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
    #[error("sample has {got} spins, distribution has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty sample")]
    EmptyTrace,
}

fn check_size(n: usize, max: usize) -> Result<(), OracleError> {
    if n > max {
        return Err(OracleError::TooLarge { n, max });
    }
    Ok(())
}

fn check_temperature<R: Real>(t: R) -> Result<(), OracleError> {
    if !(t > R::zero()) {
        return Err(OracleError::NonPositiveTemperature(t.as_f64()));
    }
    Ok(())
}

/// Visits every configuration in Gray-code order with its energy.
fn for_each_energy(inst: &IsingInstance, mut visit: impl FnMut(u64, i64)) {
    let n = inst.n();
    let mut state = SpinState::all_down(n);
    let mut fields = inst.local_fields(&state).expect("state matches instance");
    let mut energy = inst.energy(&state).expect("state matches instance");
    let mut index = 0u64;
    visit(index, energy);
    for k in 1u64..(1u64 << n) {
        let bit = k.trailing_zeros() as usize;
        let old = state.spin(bit);
        energy += 2 * old * fields[bit];
        for (i, u) in fields.iter_mut().enumerate() {
            *u -= 2 * inst.coupling(i, bit) * old;
        }
        state.flip(bit);
        index ^= 1 << bit;
        visit(index, energy);
    }
}

/// Energies of all `2^n` configurations, indexed by configuration.
pub fn all_energies(inst: &IsingInstance) -> Result<Vec<i64>, OracleError> {
    check_size(inst.n(), MAX_GIBBS_SPINS)?;
    let mut out = vec![0i64; 1 << inst.n()];
    for_each_energy(inst, |idx, e| out[idx as usize] = e);
    Ok(out)
}

/// Exhaustive minimum. Ties go to the lowest configuration index.
pub fn brute_force_ground(inst: &IsingInstance) -> Result<(SpinState, i64), OracleError> {
    check_size(inst.n(), MAX_GROUND_SPINS)?;
    let mut best = (u64::MAX, i64::MAX);
    for_each_energy(inst, |idx, e| {
        if e < best.1 || (e == best.1 && idx < best.0) {
            best = (idx, e);
        }
    });
    Ok((SpinState::from_index(inst.n(), best.0), best.1))
}

/// Probability vector over all configurations of `n` spins.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution<R> {
    n: usize,
    probs: Vec<R>,
}

impl<R: Real> ExactDistribution<R> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[R] {
        &self.probs
    }

    pub fn prob(&self, s: &SpinState) -> R {
        self.probs[s.to_index() as usize]
    }

    /// Most probable configuration (lowest index on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }
}

/// `π_T(s) = exp(-H(s)/T) / Z`, normalized in the log domain.
pub fn exact_gibbs<R: Real>(inst: &IsingInstance, temperature: R) -> Result<ExactDistribution<R>, OracleError> {
    check_size(inst.n(), MAX_GIBBS_SPINS)?;
    check_temperature(temperature)?;
    let energies = all_energies(inst)?;
    let log_w: Vec<R> = energies.iter().map(|&e| R::of_i64(-e) / temperature).collect();
    let max = log_w.iter().copied().fold(R::neg_infinity(), R::max);
    let mut z = CompensatedSum::default();
    let mut probs: Vec<R> = log_w.iter().map(|&l| (l - max).exp()).collect();
    for &p in &probs {
        z.add(p);
    }
    let z = z.value();
    for p in probs.iter_mut() {
        *p = *p / z;
    }
    Ok(ExactDistribution { n: inst.n(), probs })
}

/// Sparse row-stochastic matrix over the `2^n` configurations.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix<R> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<R>,
}

impl<R: Real> TransitionMatrix<R> {
    fn from_rows(n: usize, rows: impl IntoIterator<Item = Vec<(u32, R)>>) -> Self {
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of configurations, `2^n`.
    pub fn dim(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn row(&self, a: usize) -> impl Iterator<Item = (usize, R)> + '_ {
        let r = self.row_ptr[a]..self.row_ptr[a + 1];
        self.cols[r.clone()].iter().map(|&c| c as usize).zip(self.vals[r].iter().copied())
    }

    /// `P(a → b)`.
    pub fn entry(&self, a: usize, b: usize) -> R {
        let r = self.row_ptr[a]..self.row_ptr[a + 1];
        match self.cols[r.clone()].binary_search(&(b as u32)) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => R::zero(),
        }
    }

    /// Largest `|Σ_b P(a→b) - 1|` over rows.
    pub fn max_row_sum_error(&self) -> R {
        (0..self.dim())
            .map(|a| {
                let mut acc = CompensatedSum::default();
                for (_, v) in self.row(a) {
                    acc.add(v);
                }
                (acc.value() - R::one()).abs()
            })
            .fold(R::zero(), R::max)
    }

    pub fn entries_in_unit_interval(&self) -> bool {
        self.vals.iter().all(|&v| v >= R::zero() && v <= R::one())
    }

    /// Row vector times matrix, `x P`.
    pub fn left_apply(&self, x: &[R]) -> Vec<R> {
        let mut out = vec![R::zero(); self.dim()];
        for (a, &xa) in x.iter().enumerate() {
            if xa == R::zero() {
                continue;
            }
            for (b, v) in self.row(a) {
                out[b] = out[b] + xa * v;
            }
        }
        out
    }

    /// Largest `|π(a) P(a→b) - π(b) P(b→a)|` over all stored entries.
    pub fn max_detailed_balance_violation(&self, pi: &[R]) -> R {
        let mut worst = R::zero();
        for a in 0..self.dim() {
            for (b, v) in self.row(a) {
                let d = (pi[a] * v - pi[b] * self.entry(b, a)).abs();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `‖π P - π‖∞`.
    pub fn stationarity_residual(&self, pi: &[R]) -> R {
        self.left_apply(pi).iter().zip(pi).map(|(&a, &b)| (a - b).abs()).fold(R::zero(), R::max)
    }

    /// Every configuration reaches every other through positive entries.
    pub fn is_strongly_connected(&self) -> bool {
        let dim = self.dim();
        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); dim];
        for a in 0..dim {
            for (b, v) in self.row(a) {
                if v > R::zero() {
                    reverse[b].push(a);
                }
            }
        }
        let forward = |a: usize| -> Vec<usize> { self.row(a).filter(|&(_, v)| v > R::zero()).map(|(b, _)| b).collect() };
        reachable_count(dim, forward) == dim && reachable_count(dim, |a| reverse[a].clone()) == dim
    }

    pub fn diagonal(&self, a: usize) -> R {
        self.entry(a, a)
    }
}

fn reachable_count(dim: usize, neighbors: impl Fn(usize) -> Vec<usize>) -> usize {
    let mut seen = vec![false; dim];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(a) = queue.pop_front() {
        for b in neighbors(a) {
            if !seen[b] {
                seen[b] = true;
                count += 1;
                queue.push_back(b);
            }
        }
    }
    count
}

fn flip_probabilities<R: Real>(inst: &IsingInstance, state: &SpinState, temperature: R) -> Vec<R> {
    inst.local_fields(state)
        .expect("state matches instance")
        .into_iter()
        .enumerate()
        .map(|(i, u)| {
            let de = 2 * state.spin(i) * u;
            R::one() / (R::one() + (R::of_i64(de) / temperature).exp())
        })
        .collect()
}

/// Random-scan Glauber kernel: `P(s → s^(i)) = p_i / n`, self-loop
/// carries the remainder, all other entries zero.
pub fn build_random_scan_kernel<R: Real>(inst: &IsingInstance, temperature: R) -> Result<TransitionMatrix<R>, OracleError> {
    let n = inst.n();
    check_size(n, MAX_KERNEL_SPINS)?;
    check_temperature(temperature)?;
    let inv_n = R::one() / R::of(n as f64);
    let rows = (0..1u64 << n).map(|a| {
        let s = SpinState::from_index(n, a);
        let p = flip_probabilities(inst, &s, temperature);
        let mut row = Vec::with_capacity(n + 1);
        let mut out = CompensatedSum::default();
        for (i, &pi) in p.iter().enumerate() {
            let v = pi * inv_n;
            out.add(v);
            row.push(((a ^ (1 << i)) as u32, v));
        }
        row.push((a as u32, R::one() - out.value()));
        row
    });
    Ok(TransitionMatrix::from_rows(n, rows))
}

/// Roulette-wheel kernel and its numerically computed stationary law.
#[derive(Clone, Debug)]
pub struct RouletteKernel<R> {
    pub matrix: TransitionMatrix<R>,
    pub stationary: ExactDistribution<R>,
    /// `‖π P - π‖∞` of the reported stationary vector.
    pub residual: R,
}

/// Roulette-wheel kernel `P(s → s^(i)) = p_i / Σ_j p_j`, zero diagonal.
///
/// The chain has period two, so the stationary vector is found by power
/// iteration on `P²` restricted to the even-parity class and then pushed
/// one step through `P` to fill the odd class.
pub fn build_roulette_kernel<R: Real>(inst: &IsingInstance, temperature: R) -> Result<RouletteKernel<R>, OracleError> {
    let n = inst.n();
    check_size(n, MAX_KERNEL_SPINS)?;
    check_temperature(temperature)?;
    let rows = (0..1u64 << n).map(|a| {
        let s = SpinState::from_index(n, a);
        let p = flip_probabilities(inst, &s, temperature);
        let mut total = CompensatedSum::default();
        for &pi in &p {
            total.add(pi);
        }
        let total = total.value();
        p.iter().enumerate().map(|(i, &pi)| ((a ^ (1 << i)) as u32, pi / total)).collect::<Vec<_>>()
    });
    let matrix = TransitionMatrix::from_rows(n, rows);
    let (stationary, residual) = periodic_stationary(&matrix);
    Ok(RouletteKernel { stationary: ExactDistribution { n, probs: stationary }, matrix, residual })
}

fn periodic_stationary<R: Real>(p: &TransitionMatrix<R>) -> (Vec<R>, R) {
    let dim = p.dim();
    let even: Vec<usize> = (0..dim).filter(|a| a.count_ones() % 2 == 0).collect();
    let mut x = vec![R::zero(); dim];
    let w = R::one() / R::of(even.len() as f64);
    for &a in &even {
        x[a] = w;
    }
    let tol = R::of(1e-15);
    for _ in 0..200_000 {
        let next = p.left_apply(&p.left_apply(&x));
        let delta = next.iter().zip(&x).map(|(&a, &b)| (a - b).abs()).fold(R::zero(), R::max);
        x = next;
        if delta < tol {
            break;
        }
    }
    let odd = p.left_apply(&x);
    let half = R::of(0.5);
    let pi: Vec<R> = x.iter().zip(&odd).map(|(&e, &o)| (e + o) * half).collect();
    let residual = p.stationarity_residual(&pi);
    (pi, residual)
}

/// Kernel of the fully synchronous update: every spin independently flips
/// with its Glauber probability computed from the previous state.
pub fn build_naive_sync_kernel<R: Real>(inst: &IsingInstance, temperature: R) -> Result<TransitionMatrix<R>, OracleError> {
    let n = inst.n();
    check_size(n, MAX_SYNC_KERNEL_SPINS)?;
    check_temperature(temperature)?;
    let dim = 1u64 << n;
    let rows = (0..dim).map(|a| {
        let s = SpinState::from_index(n, a);
        let p = flip_probabilities(inst, &s, temperature);
        (0..dim)
            .map(|b| {
                let diff = a ^ b;
                let v = p
                    .iter()
                    .enumerate()
                    .fold(R::one(), |acc, (i, &pi)| acc * if diff >> i & 1 == 1 { pi } else { R::one() - pi });
                (b as u32, v)
            })
            .collect::<Vec<_>>()
    });
    Ok(TransitionMatrix::from_rows(n, rows))
}

/// Total variation distance between visit counts and an exact law.
pub fn tv_from_counts<R: Real>(counts: &[u64], exact: &ExactDistribution<R>) -> Result<f64, OracleError> {
    if counts.len() != exact.probs.len() {
        return Err(OracleError::DimensionMismatch { expected: exact.probs.len(), got: counts.len() });
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(OracleError::EmptyTrace);
    }
    let total = total as f64;
    let sum: f64 = counts.iter().zip(&exact.probs).map(|(&c, &p)| (c as f64 / total - p.as_f64()).abs()).sum();
    Ok(0.5 * sum)
}

/// Total variation distance between the empirical histogram of `samples`
/// and `exact`.
pub fn empirical_tv<'a, R: Real>(
    samples: impl IntoIterator<Item = &'a SpinState>,
    exact: &ExactDistribution<R>,
) -> Result<f64, OracleError> {
    let mut counts = vec![0u64; exact.probs.len()];
    for s in samples {
        if s.len() != exact.n {
            return Err(OracleError::DimensionMismatch { expected: exact.n, got: s.len() });
        }
        counts[s.to_index() as usize] += 1;
    }
    tv_from_counts(&counts, exact)
}
