mod common;

use common::{random_instance, random_state, spins_of};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use snowball_core::{BitPlaneMatrix, SpinState};

fn random_matrix(n: usize, max: i64, rng: &mut StdRng) -> Vec<i64> {
    let mut j = vec![0i64; n * n];
    for a in 0..n {
        for b in (a + 1)..n {
            let v = rng.gen_range(-max..=max);
            j[a * n + b] = v;
            j[b * n + a] = v;
        }
    }
    j
}

fn dense_fields(n: usize, j: &[i64], h: &[i64], s: &[i64]) -> Vec<i64> {
    (0..n).map(|i| h[i] + (0..n).map(|k| j[i * n + k] * s[k]).sum::<i64>()).collect()
}

#[test]
fn exhaustive_n4_round_trip_b3() {
    // six upper-triangle couplings, each in -7..=7
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| ((i + 1)..4).map(move |j| (i, j))).collect();
    let mut failures = 0;
    for code in 0..15u64.pow(6) {
        let mut c = code;
        let mut j = vec![0i64; 16];
        for &(a, b) in &pairs {
            let v = (c % 15) as i64 - 7;
            c /= 15;
            j[a * 4 + b] = v;
            j[b * 4 + a] = v;
        }
        let m = BitPlaneMatrix::encode(4, &j, 3).unwrap();
        if m.decode() != j || !m.is_canonical() {
            failures += 1;
        }
    }
    assert_eq!(failures, 0);
}

#[test]
fn random_n64_round_trips() {
    let mut rng = StdRng::seed_from_u64(7);
    for &b in &[1u32, 2, 8, 16] {
        let max = (1i64 << b) - 1;
        for _ in 0..250 {
            let j = random_matrix(64, max, &mut rng);
            let m = BitPlaneMatrix::encode(64, &j, b).unwrap();
            assert_eq!(m.decode(), j);
            for a in (0..64).step_by(7) {
                for c in (0..64).step_by(5) {
                    assert_eq!(m.coupling(a, c), m.coupling_from_columns(a, c));
                }
            }
        }
    }
}

#[test]
fn overflow_is_rejected() {
    let mut j = vec![0i64; 9];
    j[1] = 4;
    j[3] = 4;
    assert!(BitPlaneMatrix::encode(3, &j, 2).is_err());
    assert!(BitPlaneMatrix::encode(3, &j, 3).is_ok());
    j[1] = -4;
    j[3] = -4;
    assert!(BitPlaneMatrix::encode(3, &j, 2).is_err());
}

#[test]
fn init_matches_dense_product_n256() {
    let mut rng = StdRng::seed_from_u64(11);
    let n = 256;
    let j = random_matrix(n, 3, &mut rng);
    let h: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
    let m = BitPlaneMatrix::encode(n, &j, 2).unwrap();
    for seed in 0..5 {
        let s = random_state(n, seed);
        let lfv = m.init_local_fields(&s, &h).unwrap();
        let dense = dense_fields(n, &j, &h, &spins_of(&s));
        assert!((0..n).all(|i| lfv.field(i) == dense[i]));
    }
}

#[test]
fn incremental_updates_stay_exact_n512() {
    let n = 512;
    let inst = random_instance(n, 3, 3, 5);
    let m = BitPlaneMatrix::from_instance(&inst, 2).unwrap();
    let mut s = random_state(n, 5);
    let mut lfv = m.init_local_fields(&s, inst.biases()).unwrap();
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..10_000 {
        let j = rng.gen_range(0..n);
        let old = s.spin(j);
        s.flip(j);
        m.incremental_update(&mut lfv, j, old).unwrap();
    }
    let fresh = m.init_local_fields(&s, inst.biases()).unwrap();
    assert!(fresh.same_fields(&lfv));
    assert_eq!(lfv.coupler().len(), n);
}

#[test]
fn word_read_counters_follow_cost_shape() {
    for &(n, b) in &[(64usize, 1u32), (100, 2), (130, 4), (512, 2)] {
        let inst = random_instance(n, 1, 1, n as u64);
        let m = BitPlaneMatrix::from_instance(&inst, b).unwrap();
        let w = n.div_ceil(64) as u64;
        assert_eq!(m.words_per_line() as u64, w);
        let s = SpinState::random(n, 1);
        let mut lfv = m.init_local_fields(&s, inst.biases()).unwrap();
        assert_eq!(lfv.word_reads(), 2 * b as u64 * n as u64 * w);
        let before = lfv.word_reads();
        m.incremental_update(&mut lfv, 3, s.spin(3)).unwrap();
        assert_eq!(lfv.word_reads() - before, 2 * b as u64 * w);
    }
}

#[test]
fn incremental_update_validates_input() {
    let inst = random_instance(8, 1, 1, 0);
    let m = BitPlaneMatrix::from_instance(&inst, 1).unwrap();
    let s = SpinState::all_up(8);
    let mut lfv = m.init_local_fields(&s, inst.biases()).unwrap();
    assert!(m.incremental_update(&mut lfv, 8, 1).is_err());
    assert!(m.incremental_update(&mut lfv, 0, 0).is_err());
    assert!(m.init_local_fields(&SpinState::all_up(9), inst.biases()).is_err());
}

#[test]
fn dump_round_trip() {
    let inst = random_instance(70, 7, 0, 3);
    let m = BitPlaneMatrix::from_instance(&inst, 3).unwrap();
    let mut buf = Vec::new();
    m.write_dump(&mut buf).unwrap();
    assert_eq!(&buf[..8], b"SBPLANE1");
    let back = BitPlaneMatrix::read_dump(buf.as_slice()).unwrap();
    assert_eq!(back.decode(), m.decode());
    assert!((0..70).all(|j| back.col_words(2, j) == m.col_words(2, j)));
    assert!(BitPlaneMatrix::read_dump(&buf[..buf.len() - 1]).is_err());
}
