mod common;

use common::random_instance;
use snowball_core::oracle::{
    all_energies, brute_force_ground, build_naive_sync_kernel, build_random_scan_kernel, build_roulette_kernel,
    empirical_tv, exact_gibbs, tv_from_counts, OracleError,
};
use snowball_core::{IsingInstance, SpinState};

#[test]
fn gray_code_energies_match_direct_evaluation() {
    let inst = random_instance(11, 5, 5, 3);
    let energies = all_energies(&inst).unwrap();
    for (idx, &e) in energies.iter().enumerate() {
        assert_eq!(e, inst.energy(&SpinState::from_index(11, idx as u64)).unwrap());
    }
}

#[test]
fn trivial_ground_states() {
    let n = 7;
    let inst = IsingInstance::new(n, vec![0; n * n], vec![1; n]).unwrap();
    let (s, e) = brute_force_ground(&inst).unwrap();
    assert_eq!((s, e), (SpinState::all_up(n), -(n as i64)));

    let pair = IsingInstance::from_pairs(2, [(0, 1, 1)], vec![0, 0]).unwrap();
    let (s, e) = brute_force_ground(&pair).unwrap();
    assert_eq!(e, -1);
    assert_eq!(s.to_index(), 0);
    assert_eq!(s, SpinState::all_down(2));
}

#[test]
fn size_limits() {
    let big = random_instance(13, 1, 1, 0);
    assert!(matches!(build_random_scan_kernel(&big, 1.0), Err(OracleError::TooLarge { .. })));
    assert!(matches!(exact_gibbs(&random_instance(17, 1, 1, 0), 1.0), Err(OracleError::TooLarge { .. })));
    assert!(matches!(exact_gibbs(&big, 0.0), Err(OracleError::NonPositiveTemperature(_))));
}

#[test]
fn gibbs_ratios_and_normalization() {
    let inst = random_instance(3, 4, 4, 21);
    let t = 1.7f64;
    let pi = exact_gibbs(&inst, t).unwrap();
    let e = all_energies(&inst).unwrap();
    assert!((pi.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    for a in 0..8 {
        for b in 0..8 {
            let ratio = pi.probs()[a] / pi.probs()[b];
            let expect = ((e[b] - e[a]) as f64 / t).exp();
            assert!((ratio / expect - 1.0).abs() < 1e-10);
        }
    }
    let hot = exact_gibbs(&random_instance(10, 3, 3, 1), 1e9f64).unwrap();
    assert!(hot.probs().iter().all(|p| (p - 1.0 / 1024.0).abs() < 1e-6));
}

#[test]
fn cold_gibbs_mode_is_a_ground_state() {
    for seed in 0..10 {
        let inst = random_instance(10, 3, 3, seed);
        let (_, ground) = brute_force_ground(&inst).unwrap();
        let pi = exact_gibbs(&inst, 0.01).unwrap();
        let mode = SpinState::from_index(10, pi.argmax() as u64);
        assert_eq!(inst.energy(&mode).unwrap(), ground);
    }
}

#[test]
fn random_scan_kernel_entries_match_glauber_formula() {
    let n = 5;
    let inst = random_instance(n, 3, 3, 2);
    let t = 0.8f64;
    let k = build_random_scan_kernel(&inst, t).unwrap();
    for a in 0..1u64 << n {
        let s = SpinState::from_index(n, a);
        let mut stay = 1.0f64;
        for b in 0..1u64 << n {
            let d = (a ^ b).count_ones();
            let v = k.entry(a as usize, b as usize);
            if d == 1 {
                let i = (a ^ b).trailing_zeros() as usize;
                let de = inst.flip_delta(&s, i).unwrap() as f64;
                let expect = 1.0 / (1.0 + (de / t).exp()) / n as f64;
                assert!((v - expect).abs() < 1e-15);
                stay -= expect;
            } else if d > 1 {
                assert_eq!(v, 0.0);
            }
        }
        assert!((k.diagonal(a as usize) - stay).abs() < 1e-14);
    }
}

#[test]
fn random_scan_kernel_detailed_balance_and_stationarity() {
    for (k, n) in [2usize, 4, 6, 8, 10, 12].into_iter().enumerate() {
        let inst = random_instance(n, 3, 3, 40 + k as u64);
        for t in [0.5, 1.0, 2.0] {
            let p = build_random_scan_kernel(&inst, t).unwrap();
            let pi = exact_gibbs(&inst, t).unwrap();
            assert!(p.max_row_sum_error() < 1e-12);
            assert!(p.entries_in_unit_interval());
            assert!(p.max_detailed_balance_violation(pi.probs()) < 1e-12);
            assert!(p.stationarity_residual(pi.probs()) < 1e-12);
        }
    }
}

#[test]
fn roulette_kernel_structure() {
    let n = 6;
    let inst = random_instance(n, 3, 3, 77);
    let rk = build_roulette_kernel(&inst, 1.0).unwrap();
    let p = &rk.matrix;
    assert!(p.max_row_sum_error() < 1e-12);
    assert!(p.is_strongly_connected());
    for a in 0..p.dim() {
        assert_eq!(p.diagonal(a), 0.0);
        for (b, v) in p.row(a) {
            assert!(v == 0.0 || (a ^ b).count_ones() % 2 == 1);
        }
        let return_prob: f64 = p.row(a).map(|(b, v)| v * p.entry(b, a)).sum();
        assert!(return_prob > 0.0);
    }
    assert!(rk.residual < 1e-10);
    assert!((rk.stationary.probs().iter().sum::<f64>() - 1.0).abs() < 1e-10);
}

#[test]
fn naive_sync_kernel_breaks_detailed_balance() {
    let inst = IsingInstance::from_pairs(2, [(0, 1, 1)], vec![0, 0]).unwrap();
    let p = build_naive_sync_kernel(&inst, 1.0).unwrap();
    let pi = exact_gibbs(&inst, 1.0).unwrap();
    assert!(p.max_row_sum_error() < 1e-12);
    assert!(p.max_detailed_balance_violation(pi.probs()) > 1e-3);
}

#[test]
fn total_variation_edge_cases() {
    let flat = exact_gibbs(&IsingInstance::new(3, vec![0; 9], vec![0; 3]).unwrap(), 1.0).unwrap();
    assert!(tv_from_counts(&[5; 8], &flat).unwrap() < 1e-15);
    let states: Vec<SpinState> = (0..8).map(|i| SpinState::from_index(3, i)).collect();
    assert!(empirical_tv(&states, &flat).unwrap() < 1e-15);

    let field = IsingInstance::new(3, vec![0; 9], vec![1; 3]).unwrap();
    let peaked = exact_gibbs(&field, 1e-3).unwrap();
    let wrong = [SpinState::all_down(3)];
    assert!((empirical_tv(&wrong, &peaked).unwrap() - 1.0).abs() < 1e-12);

    assert!(matches!(tv_from_counts(&[1; 4], &flat), Err(OracleError::DimensionMismatch { .. })));
    assert!(matches!(tv_from_counts(&[0; 8], &flat), Err(OracleError::EmptyTrace)));
    assert!(empirical_tv(&[SpinState::all_up(4)], &flat).is_err());
}
