//! End-to-end acceptance checks. Each test prints one
//! `criterion N <name>: PASS|FAIL <detail>` line to standard output.

use std::io::Write;
use std::path::Path;
use std::process::Command;

use snowball_core::bench::{estimate_success, gen_planted_grid, gen_precision_landscape, tts, Bitmap, SuccessTarget};
use snowball_core::engine::{logistic_lut, step_naive_sync, LogisticTable, RouletteDraw};
use snowball_core::model::maxcut_encode;
use snowball_core::oracle::{brute_force_ground, build_random_scan_kernel, exact_gibbs, tv_from_counts};
use snowball_core::rng::{draw_u32, RandomContext, Salt};
use snowball_core::{run, AnnealSchedule, BitPlaneMatrix, Chain, EngineConfig, InitialState, IsingInstance, SpinState};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn report(id: u32, name: &str, pass: bool, detail: String) {
    let line = format!("criterion {id:>2} {name}: {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    // Written past the test harness capture so the line always shows.
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(pass, "{}", line.trim_end());
}

/// Dense instance with couplings and fields uniform in `-m..=m`.
fn instance(n: usize, m: i64, seed: u64) -> IsingInstance {
    let mut k = 0u64;
    let mut next = || {
        k += 1;
        (draw_u32(RandomContext::new(seed, 3, k, Salt::Instance)) as u64 % (2 * m as u64 + 1)) as i64 - m
    };
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j, next()));
        }
    }
    let h = (0..n).map(|_| next()).collect();
    IsingInstance::from_pairs(n, pairs, h).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

#[test]
fn c01_tts_formula() {
    let a = tts(0.99, 4610.0, 0.38).unwrap();
    let b = tts(0.99, 0.13, 0.07).unwrap();
    let (ea, eb) = ((a - 44_413.0).abs() / 44_413.0, (b - 8.23).abs() / 8.23);
    report(1, "tts formula", ea <= 1e-3 && eb <= 3e-3, format!("{a:.1} ms (rel {ea:.1e}), {b:.4} ms (rel {eb:.1e})"));
}

fn ground_hit_rates(steps: u64) -> Vec<f64> {
    let sched = AnnealSchedule::linear(10.0, 0.05, steps).unwrap();
    (0..50u64)
        .map(|k| {
            let inst = instance(16, 3, 500 + k);
            let (_, ground) = brute_force_ground(&inst).unwrap();
            let cfg = EngineConfig::new(sched).with_seed(k * 1000);
            estimate_success(&inst, &cfg, SuccessTarget::Energy(ground), 100).unwrap().p_a
        })
        .collect()
}

#[test]
fn c02_ground_state_recovery() {
    let at_800 = median(ground_hit_rates(800));
    // Reported for context only: the same instances under a 4x longer schedule.
    let at_3200 = median(ground_hit_rates(3200));
    report(
        2,
        "ground-state recovery",
        at_800 >= 0.95,
        format!("median hit rate {:.0}% at K=800 (needs 95%); {:.0}% at K=3200", at_800 * 100.0, at_3200 * 100.0),
    );
}

#[test]
fn c03_kernel_exactness() {
    let mut worst = [0.0f64; 3];
    for k in 0..20u64 {
        let n = 2 + (k % 9) as usize;
        let inst = instance(n, 3, 900 + k);
        for t in [0.5, 1.0, 2.0] {
            let p = build_random_scan_kernel(&inst, t).unwrap();
            let pi = exact_gibbs(&inst, t).unwrap();
            worst[0] = worst[0].max(p.max_row_sum_error());
            worst[1] = worst[1].max(p.max_detailed_balance_violation(pi.probs()));
            worst[2] = worst[2].max(p.stationarity_residual(pi.probs()));
        }
    }
    report(
        3,
        "kernel exactness",
        worst.iter().all(|&w| w <= 1e-12),
        format!("row sums {:.1e}, detailed balance {:.1e}, stationarity {:.1e}", worst[0], worst[1], worst[2]),
    );
}

#[test]
fn c04_gibbs_sampling() {
    let n = 8;
    let inst = instance(n, 3, 41);
    let temp = 2.0;
    let planes = BitPlaneMatrix::from_instance(&inst, 2).unwrap();
    let mut chain = Chain::new(&inst, &planes, SpinState::random(n, 4), 4, None).unwrap();
    let (burn_in, stride, samples) = (10_000u64, 10u64, 1_000_000u64);
    let mut counts = vec![0u64; 1 << n];
    let mut t = 0u64;
    while t < burn_in {
        t += 1;
        chain.step_random_scan(temp, 0, t);
    }
    for _ in 0..samples {
        for _ in 0..stride {
            t += 1;
            chain.step_random_scan(temp, 0, t);
        }
        counts[chain.state().to_index() as usize] += 1;
    }
    let tv = tv_from_counts(&counts, &exact_gibbs(&inst, temp).unwrap()).unwrap();
    report(4, "gibbs sampling", tv < 0.02, format!("TV {tv:.4} over {samples} samples"));
}

#[test]
fn c05_incremental_update() {
    let n = 512;
    let inst = instance(n, 3, 55);
    let planes = BitPlaneMatrix::from_instance(&inst, 2).unwrap();
    let mut chain = Chain::new(&inst, &planes, SpinState::random(n, 55), 55, None).unwrap();
    let (mut flips, mut t) = (0u64, 0u64);
    while flips < 10_000 {
        t += 1;
        flips += chain.step_random_scan(5.0, 0, t).flipped_site().is_some() as u64;
    }
    let fresh = planes.init_local_fields(chain.state(), inst.biases()).unwrap();
    let dense = inst.local_fields(chain.state()).unwrap();
    let exact = fresh.same_fields(chain.fields()) && (0..n).all(|i| chain.fields().field(i) == dense[i]);
    report(5, "incremental update", exact, format!("{flips} accepted flips in {t} steps"));
}

#[test]
fn c06_bitplane_round_trip() {
    let mut failures = 0u64;
    let mut checked = 0u64;
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| ((i + 1)..4).map(move |j| (i, j))).collect();
    let mut j = vec![0i64; 16];
    for code in 0..15u64.pow(6) {
        let mut c = code;
        for &(a, b) in &pairs {
            let v = (c % 15) as i64 - 7;
            c /= 15;
            j[a * 4 + b] = v;
            j[b * 4 + a] = v;
        }
        checked += 1;
        failures += (BitPlaneMatrix::encode(4, &j, 3).unwrap().decode() != j) as u64;
    }
    for b in [1u32, 2, 8, 16] {
        let max = (1u64 << b) - 1;
        for rep in 0..1000u64 {
            let mut j = vec![0i64; 64 * 64];
            let mut k = 0;
            for a in 0..64 {
                for c in (a + 1)..64 {
                    k += 1;
                    let u = draw_u32(RandomContext::new(rep, b as u64, k, Salt::Instance)) as u64;
                    let v = (u % (2 * max + 1)) as i64 - max as i64;
                    j[a * 64 + c] = v;
                    j[c * 64 + a] = v;
                }
            }
            checked += 1;
            failures += (BitPlaneMatrix::encode(64, &j, b).unwrap().decode() != j) as u64;
        }
    }
    report(6, "bit-plane round trip", failures == 0, format!("{failures} failures over {checked} matrices"));
}

#[test]
fn c07_oscillation_anti_pattern() {
    let inst = IsingInstance::from_pairs(2, [(0, 1, 1)], vec![0, 0]).unwrap();
    let start = SpinState::from_spins(&[1, -1]);
    let mut s = start.clone();
    let mut cycle = true;
    for t in 0..100 {
        s = step_naive_sync(&inst, &s, 1e-6, 7, t).unwrap();
        cycle &= s == if t % 2 == 0 { start.global_flip() } else { start.clone() };
    }
    let planes = BitPlaneMatrix::from_instance(&inst, 1).unwrap();
    let mut chain = Chain::new(&inst, &planes, start, 7, None).unwrap();
    let aligned = |s: &SpinState| s.spin(0) == s.spin(1);
    let mut reached = None;
    let mut held = true;
    for t in 1..=100u64 {
        chain.step_random_scan(1e-6, t, t);
        match reached {
            None if aligned(chain.state()) => reached = Some(t),
            Some(_) => held &= aligned(chain.state()),
            None => {}
        }
    }
    report(
        7,
        "oscillation anti-pattern",
        cycle && reached.is_some() && held,
        format!("naive sync period-2 for 100 steps: {cycle}; random scan aligned at step {reached:?}, held: {held}"),
    );
}

/// Chi-square statistic and its 0.01 critical value. Cells expecting fewer
/// than five counts are pooled into one.
fn chi_square(observed: &[u64], expected: &[f64]) -> (f64, f64) {
    let mut cells = Vec::new();
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
    let crit = ChiSquared::new((cells.len() - 1) as f64).unwrap().inverse_cdf(0.99);
    (stat, crit)
}

#[test]
fn c08_roulette_selection_law() {
    let n = 16;
    let inst = instance(n, 1, 88);
    let planes = BitPlaneMatrix::from_instance(&inst, 2).unwrap();
    let mut chain = Chain::new(&inst, &planes, SpinState::random(n, 88), 88, None).unwrap();
    let draws = 100_000u64;
    let mut counts = vec![0u64; n];
    for t in 1..=draws {
        if let RouletteDraw::Selected(j) = chain.roulette_draw(1.0, t, t, false) {
            counts[j] += 1;
        }
    }
    let w = chain.last_weights().to_vec();
    let total: f64 = w.iter().sum();
    let expected: Vec<f64> = w.iter().map(|x| x / total * draws as f64).collect();
    let (stat, crit) = chi_square(&counts, &expected);

    let nulls = (1..=draws).filter(|&t| chain.roulette_draw(1.0, t, t, true) == RouletteDraw::Null).count();
    let rate = nulls as f64 / draws as f64;
    let predicted = 1.0 - total / n as f64;
    report(
        8,
        "roulette selection law",
        stat < crit && (rate - predicted).abs() <= 0.01,
        format!("chi2 {stat:.2} < {crit:.2}; null rate {rate:.4} vs 1 - W/N = {predicted:.4}"),
    );
}

const BANNER: &str = "\
....................
###.###.###.#.#.###.
.#..#....#..###.#...
.#..###..#..###.#.#.
.#....#..#..#.#.#.#.
###.###.###.#.#.###.
....................
....................
";

#[test]
fn c09_planted_recovery() {
    let bitmap = Bitmap::parse(BANNER).unwrap();
    assert_eq!((bitmap.rows(), bitmap.cols()), (8, 20));
    let grid = gen_planted_grid(&bitmap).unwrap();
    let inst = maxcut_encode(&grid.graph).unwrap();
    let sched = AnnealSchedule::linear(2.5, 0.1, 4000 * 160).unwrap();
    let est = estimate_success(&inst, &EngineConfig::new(sched), SuccessTarget::Cut(grid.planted_cut), 100).unwrap();
    report(
        9,
        "planted recovery",
        est.successes >= 90,
        format!("{}/{} seeds reached the planted cut {}", est.successes, est.runs, grid.planted_cut),
    );
}

#[test]
fn c10_sixteen_bit_precision() {
    let land = gen_precision_landscape(32, 16, 1).unwrap();
    let n = 32 * 32;
    let planes_needed = 64 - land.instance.max_abs_coupling().leading_zeros();
    let max_field = land.instance.biases().iter().map(|h| h.abs()).max().unwrap();
    let sched = AnnealSchedule::cosine(65536.0, 1.0, 1000 * n as u64).unwrap();
    let agreement: Vec<f64> = std::thread::scope(|scope| {
        let handles: Vec<_> = (1..=4u64)
            .map(|seed| {
                let (inst, target) = (&land.instance, &land.target);
                scope.spawn(move || {
                    let cfg = EngineConfig::new(sched).with_bitplanes(16).with_seed(seed);
                    let r = run(inst, &cfg, InitialState::Random).unwrap();
                    1.0 - r.best_state.hamming_distance(target) as f64 / n as f64
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let worst = agreement.iter().copied().fold(1.0, f64::min);
    report(
        10,
        "16-bit precision",
        worst >= 0.99 && planes_needed > 8 && max_field >= 1 << 15,
        format!(
            "worst site agreement {:.2}% over {} seeds; fields up to {max_field}, couplings need {planes_needed} planes",
            worst * 100.0,
            agreement.len()
        ),
    );
}

#[test]
fn c11_lut_fidelity() {
    let table = LogisticTable::default();
    let points = 100_000;
    let mut worst = 0.0f64;
    for k in 0..points {
        let z = -16.0 + 32.0 * k as f64 / (points - 1) as f64;
        let lut = table.eval_z(z) as f64 / table.one() as f64;
        worst = worst.max((lut - 1.0 / (1.0 + z.exp())).abs());
    }
    let center = [0.01, 1.0, 37.5].iter().all(|&t| logistic_lut(0, t, &table).unwrap() == 0.5);
    report(
        11,
        "LUT fidelity",
        worst <= 1.0 / 128.0 && center,
        format!("max error {worst:.2e} (bound {:.2e}); lut(0) = 0.5: {center}", 1.0 / 128.0),
    );
}

fn solve_k2000(dir: &Path, tag: &str) -> (String, String) {
    let csv = dir.join(format!("{tag}.csv"));
    let out = Command::new(env!("CARGO_BIN_EXE_snowball"))
        .args(["solve", "--k2000", "--seed", "42", "--steps", "100", "--csv"])
        .arg(&csv)
        .env_remove("SNOWBALL_SEED")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let cut = stdout.split_whitespace().find(|w| w.starts_with("best_cut=")).unwrap().to_string();
    // Drop the timing column before comparing.
    let text = std::fs::read_to_string(csv).unwrap();
    let idx = text.lines().next().unwrap().split(',').position(|c| c == "t_a_ms").unwrap();
    let stripped = text
        .lines()
        .map(|l| l.split(',').enumerate().filter(|&(k, _)| k != idx).map(|(_, c)| c).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n");
    (cut, stripped)
}

#[test]
fn c12_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let (cut_a, csv_a) = solve_k2000(dir.path(), "a");
    let (cut_b, csv_b) = solve_k2000(dir.path(), "b");
    report(
        12,
        "determinism",
        cut_a == cut_b && csv_a == csv_b && csv_a.lines().count() == 2,
        format!("{cut_a} vs {cut_b}; CSV rows identical: {}", csv_a == csv_b),
    );
}
