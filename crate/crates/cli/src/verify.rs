//! Oracle checks behind `snowball verify`. Each check prints one
//! `PASS name` or `FAIL name: detail` line.

use snowball_core::bench::tts;
use snowball_core::engine::{logistic_exact, logistic_lut, step_naive_sync, LogisticTable};
use snowball_core::model::k5_demo;
use snowball_core::oracle::{brute_force_ground, build_naive_sync_kernel, build_random_scan_kernel, build_roulette_kernel, exact_gibbs};
use snowball_core::rng::{draw_u32, RandomContext, Salt};
use snowball_core::{run, AnnealSchedule, BitPlaneMatrix, EngineConfig, InitialState, IsingInstance, SpinState};

type Check = fn(u64) -> Result<(), String>;

const CHECKS: &[(&str, Check)] = &[
    ("tts-formula", tts_formula),
    ("demo-ground-state", demo_ground_state),
    ("random-scan-kernel", random_scan_kernel),
    ("roulette-kernel", roulette_kernel),
    ("naive-sync-balance-violation", naive_sync_violation),
    ("naive-sync-oscillation", naive_sync_oscillation),
    ("lut-fidelity", lut_fidelity),
    ("bitplane-round-trip", bitplane_round_trip),
    ("incremental-update", incremental_update),
    ("anneal-finds-ground-state", anneal_finds_ground),
];

/// Runs every check and returns the names of the failures.
pub fn run_all(seed: u64) -> Vec<&'static str> {
    let mut failed = Vec::new();
    for &(name, check) in CHECKS {
        match check(seed) {
            Ok(()) => println!("PASS {name}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                failed.push(name);
            }
        }
    }
    println!("{}/{} checks passed", CHECKS.len() - failed.len(), CHECKS.len());
    failed
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

/// Dense instance with couplings and fields in `-m..=m`.
fn instance(n: usize, m: i64, seed: u64) -> IsingInstance {
    let mut k = 0u64;
    let mut next = || {
        k += 1;
        (draw_u32(RandomContext::new(seed, 7, k, Salt::Instance)) as u64 % (2 * m as u64 + 1)) as i64 - m
    };
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j, next()));
        }
    }
    let h = (0..n).map(|_| next()).collect();
    IsingInstance::from_pairs(n, pairs, h).expect("small instance is valid")
}

fn tts_formula(_: u64) -> Result<(), String> {
    for (t_a, p_a, expect, tol) in [(4610.0, 0.38, 44_413.0, 1e-3), (0.13, 0.07, 8.23, 3e-3)] {
        let got = tts(0.99, t_a, p_a).map_err(|e| e.to_string())?;
        ensure(((got - expect) / expect).abs() <= tol, || format!("tts(0.99, {t_a}, {p_a}) = {got}, expected {expect}"))?;
    }
    Ok(())
}

fn demo_ground_state(_: u64) -> Result<(), String> {
    let (s, e) = brute_force_ground(&k5_demo()).map_err(|e| e.to_string())?;
    let want = SpinState::from_spins(&[1, 1, -1, 1, -1]);
    ensure(e == -24 && s == want, || format!("got {s:?} at {e}"))
}

fn random_scan_kernel(seed: u64) -> Result<(), String> {
    for (k, n) in [3usize, 5, 7, 9].into_iter().enumerate() {
        let inst = instance(n, 3, seed.wrapping_add(k as u64));
        for t in [0.5, 1.0, 2.0] {
            let p = build_random_scan_kernel(&inst, t).map_err(|e| e.to_string())?;
            let pi = exact_gibbs(&inst, t).map_err(|e| e.to_string())?;
            let (rows, db, st) = (
                p.max_row_sum_error(),
                p.max_detailed_balance_violation(pi.probs()),
                p.stationarity_residual(pi.probs()),
            );
            ensure(rows < 1e-12 && db < 1e-12 && st < 1e-12, || {
                format!("n={n} T={t}: row error {rows:e}, balance {db:e}, stationarity {st:e}")
            })?;
        }
    }
    Ok(())
}

fn roulette_kernel(seed: u64) -> Result<(), String> {
    let inst = instance(6, 3, seed);
    let rk = build_roulette_kernel(&inst, 1.0).map_err(|e| e.to_string())?;
    let p = &rk.matrix;
    let zero_diag = (0..p.dim()).all(|a| p.diagonal(a) == 0.0);
    ensure(zero_diag && p.max_row_sum_error() < 1e-12 && p.is_strongly_connected() && rk.residual < 1e-10, || {
        format!("row error {:e}, stationary residual {:e}", p.max_row_sum_error(), rk.residual)
    })
}

fn naive_sync_violation(_: u64) -> Result<(), String> {
    let inst = IsingInstance::from_pairs(2, [(0, 1, 1)], vec![0, 0]).map_err(|e| e.to_string())?;
    let p = build_naive_sync_kernel(&inst, 1.0).map_err(|e| e.to_string())?;
    let pi = exact_gibbs(&inst, 1.0).map_err(|e| e.to_string())?;
    let v = p.max_detailed_balance_violation(pi.probs());
    ensure(v > 1e-3, || format!("largest violation only {v:e}"))
}

fn naive_sync_oscillation(seed: u64) -> Result<(), String> {
    let inst = IsingInstance::from_pairs(2, [(0, 1, 1)], vec![0, 0]).map_err(|e| e.to_string())?;
    let a = SpinState::from_spins(&[1, -1]);
    let mut s = a.clone();
    for t in 0..100 {
        s = step_naive_sync(&inst, &s, 1e-6, seed, t).map_err(|e| e.to_string())?;
        let want = if t % 2 == 0 { a.global_flip() } else { a.clone() };
        ensure(s == want, || format!("step {t}: {s:?}"))?;
    }
    Ok(())
}

fn lut_fidelity(_: u64) -> Result<(), String> {
    let table = LogisticTable::default();
    let points = 100_000;
    let mut worst = 0.0f64;
    for k in 0..=points {
        let z = -16.0 + 32.0 * k as f64 / points as f64;
        let lut = table.eval_z(z) as f64 / table.one() as f64;
        worst = worst.max((lut - 1.0 / (1.0 + z.exp())).abs());
    }
    let center = logistic_lut(0, 1.0, &table).map_err(|e| e.to_string())?;
    let exact = logistic_exact(0, 1.0).map_err(|e| e.to_string())?;
    ensure(worst <= 1.0 / 128.0 && center == 0.5 && exact == 0.5, || format!("max error {worst:e}, lut(0) = {center}"))
}

fn bitplane_round_trip(seed: u64) -> Result<(), String> {
    for b in [1u32, 2, 8, 16] {
        let max = (1u64 << b) - 1;
        for rep in 0..10u64 {
            let n = 64;
            let mut j = vec![0i64; n * n];
            let mut k = 0;
            for a in 0..n {
                for c in (a + 1)..n {
                    k += 1;
                    let u = draw_u32(RandomContext::new(seed, b as u64 * 16 + rep, k, Salt::Instance)) as u64;
                    let v = (u % (2 * max + 1)) as i64 - max as i64;
                    j[a * n + c] = v;
                    j[c * n + a] = v;
                }
            }
            let m = BitPlaneMatrix::encode(n, &j, b).map_err(|e| e.to_string())?;
            ensure(m.decode() == j, || format!("B={b} matrix {rep} did not round-trip"))?;
        }
    }
    Ok(())
}

fn incremental_update(seed: u64) -> Result<(), String> {
    let inst = instance(256, 3, seed);
    let m = BitPlaneMatrix::from_instance(&inst, 2).map_err(|e| e.to_string())?;
    let mut s = SpinState::random(256, seed);
    let mut lfv = m.init_local_fields(&s, inst.biases()).map_err(|e| e.to_string())?;
    for t in 0..2_000u64 {
        let j = (draw_u32(RandomContext::new(seed, 9, t, Salt::SiteSelect)) % 256) as usize;
        let old = s.spin(j);
        s.flip(j);
        m.incremental_update(&mut lfv, j, old).map_err(|e| e.to_string())?;
    }
    let fresh = m.init_local_fields(&s, inst.biases()).map_err(|e| e.to_string())?;
    ensure(fresh.same_fields(&lfv), || "maintained fields differ from a fresh initialization".into())
}

fn anneal_finds_ground(seed: u64) -> Result<(), String> {
    let inst = instance(12, 3, seed);
    let (_, ground) = brute_force_ground(&inst).map_err(|e| e.to_string())?;
    let sched = AnnealSchedule::linear(10.0, 0.05, 2400).map_err(|e| e.to_string())?;
    let mut best = i64::MAX;
    for r in 0..8 {
        let cfg = EngineConfig::new(sched).with_seed(seed.wrapping_add(r));
        best = best.min(run(&inst, &cfg, InitialState::Random).map_err(|e| e.to_string())?.best_energy);
    }
    ensure(best == ground, || format!("best {best}, ground {ground}"))
}
