#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use snowball_core::{IsingInstance, SpinState};

/// Random dense instance with couplings in `-j_max..=j_max` and biases in
/// `-h_max..=h_max`.
pub fn random_instance(n: usize, j_max: i64, h_max: i64, seed: u64) -> IsingInstance {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j, rng.gen_range(-j_max..=j_max)));
        }
    }
    let h = (0..n).map(|_| rng.gen_range(-h_max..=h_max)).collect();
    IsingInstance::from_pairs(n, pairs, h).unwrap()
}

pub fn random_state(n: usize, seed: u64) -> SpinState {
    let mut rng = StdRng::seed_from_u64(seed ^ 0xA5A5_A5A5);
    let spins: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    SpinState::from_spins(&spins)
}

/// Energy straight from the definition, over the full double loop.
pub fn energy_double_loop(inst: &IsingInstance, s: &[i64]) -> i64 {
    let n = inst.n();
    let mut h = 0;
    for i in 0..n {
        for j in 0..n {
            if i < j {
                h -= inst.coupling(i, j) * s[i] * s[j];
            }
        }
        h -= inst.bias(i) * s[i];
    }
    h
}

pub fn spins_of(s: &SpinState) -> Vec<i64> {
    s.spins().collect()
}

/// Upper 0.99 quantile of chi-square with `dof` degrees of freedom.
pub fn chi2_critical_99(dof: usize) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    ChiSquared::new(dof as f64).unwrap().inverse_cdf(0.99)
}

/// Chi-square statistic after pooling cells whose expected count is below 5.
pub fn pooled_chi_square(observed: &[u64], expected: &[f64]) -> (f64, usize) {
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut po, mut pe) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        if e < 5.0 {
            po += o as f64;
            pe += e;
        } else {
            cells.push((o as f64, e));
        }
    }
    if pe > 0.0 {
        cells.push((po, pe));
    }
    let stat = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    (stat, cells.len() - 1)
}
