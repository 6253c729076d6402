//! Benchmark instances and time-to-solution estimation.
//!
//! Each annealing run is treated as a Bernoulli trial that reaches the
//! target with probability `P_a` in time `t_a`. The time to reach the
//! target at least once with confidence `p` is
//! `TTS(p) = t_a · max(1, ln(1-p) / ln(1-P_a))`.

mod generate;
mod gset;

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{run, EngineConfig, EngineError, InitialState, Mode};
use crate::model::{IsingInstance, ModelError};
use crate::num::Real;

pub use generate::{gen_complete_random, gen_planted_grid, gen_precision_landscape, Bitmap, PlantedGrid, PlantedLandscape};
pub use gset::{parse_gset, write_gset};

/// Vertex count of the complete benchmark graph.
pub const K2000_VERTICES: usize = 2000;
/// Cut threshold counted as a success on the complete 2000-vertex graph.
pub const K2000_TARGET_CUT: i64 = 33_000;

/// Two-sided 95% normal quantile used for the Wilson interval.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    InvalidInput(String),
    #[error("target probability must lie in (0, 1), got {0}")]
    TargetProbability(f64),
    #[error("success probability must lie in [0, 1], got {0}")]
    SuccessProbability(f64),
    #[error("cut target requires an instance encoded from a graph")]
    CutTargetWithoutGraph,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `t_a · max(1, ln(1-p)/ln(1-P_a))`; infinite when `P_a = 0`.
pub fn tts(p: f64, t_a: f64, p_a: f64) -> Result<f64, BenchError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(BenchError::TargetProbability(p));
    }
    if !(0.0..=1.0).contains(&p_a) {
        return Err(BenchError::SuccessProbability(p_a));
    }
    if p_a == 0.0 {
        return Ok(f64::INFINITY);
    }
    if p_a == 1.0 {
        return Ok(t_a);
    }
    let repeats = (1.0 - p).ln() / (1.0 - p_a).ln();
    Ok(t_a * repeats.max(1.0))
}

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// What counts as a successful run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuccessTarget {
    /// Best energy at or below the threshold.
    Energy(i64),
    /// Best cut at or above the threshold.
    Cut(i64),
}

impl SuccessTarget {
    fn reached(&self, energy: i64, cut: Option<i64>) -> bool {
        match *self {
            SuccessTarget::Energy(e) => energy <= e,
            SuccessTarget::Cut(c) => cut.is_some_and(|v| v >= c),
        }
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub mode: String,
    pub seed: u64,
    pub steps: u64,
    pub best_cut: Option<i64>,
    pub best_energy: i64,
    pub t_a_ms: f64,
    pub success: Option<bool>,
}

impl RunRecord {
    pub fn new(instance: &str, mode: Mode, report: &crate::engine::RunReport, success: Option<bool>) -> Self {
        Self {
            instance: instance.to_string(),
            mode: mode_name(mode).to_string(),
            seed: report.seed,
            steps: report.steps,
            best_cut: report.best_cut,
            best_energy: report.best_energy,
            t_a_ms: report.kernel_time.as_secs_f64() * 1e3,
            success,
        }
    }
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::RandomScan => "random-scan",
        Mode::Roulette => "roulette",
    }
}

/// Outcome of `runs` independent annealing runs.
#[derive(Clone, Debug)]
pub struct SuccessEstimate {
    pub runs: u64,
    pub successes: u64,
    pub p_a: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Mean kernel time per run.
    pub t_a_ms: f64,
    pub records: Vec<RunRecord>,
}

/// Runs `runs` independent anneals with seeds `cfg.seed + r` from random
/// initial states and counts how many reach `target`.
pub fn estimate_success<R: Real>(
    instance: &IsingInstance,
    cfg: &EngineConfig<R>,
    target: SuccessTarget,
    runs: u64,
) -> Result<SuccessEstimate, BenchError> {
    if runs == 0 {
        return Err(BenchError::InvalidInput("at least one run is required".into()));
    }
    if matches!(target, SuccessTarget::Cut(_)) && instance.total_weight().is_none() {
        return Err(BenchError::CutTargetWithoutGraph);
    }
    cfg.validate()?;
    let records = (0..runs)
        .into_par_iter()
        .map(|r| {
            let cfg_r = EngineConfig { seed: cfg.seed.wrapping_add(r), ..cfg.clone() };
            let report = run(instance, &cfg_r, InitialState::Random)?;
            let ok = target.reached(report.best_energy, report.best_cut);
            Ok(RunRecord::new(instance.label(), cfg.mode, &report, Some(ok)))
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    let successes = records.iter().filter(|r| r.success == Some(true)).count() as u64;
    let (ci_low, ci_high) = wilson_interval(successes, runs);
    let t_a_ms = records.iter().map(|r| r.t_a_ms).sum::<f64>() / runs as f64;
    Ok(SuccessEstimate { runs, successes, p_a: successes as f64 / runs as f64, ci_low, ci_high, t_a_ms, records })
}

/// TTS summary, serialized as the JSON report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TtsEstimate {
    pub instance: String,
    pub p: f64,
    #[serde(rename = "P_a")]
    pub p_a: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `None` when no run succeeded (infinite TTS).
    pub tts_ms: Option<f64>,
    pub runs: u64,
    pub t_a_ms: f64,
}

impl TtsEstimate {
    pub fn from_success(instance: &str, p: f64, est: &SuccessEstimate) -> Result<Self, BenchError> {
        let t = tts(p, est.t_a_ms, est.p_a)?;
        Ok(Self {
            instance: instance.to_string(),
            p,
            p_a: est.p_a,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            tts_ms: t.is_finite().then_some(t),
            runs: est.runs,
            t_a_ms: est.t_a_ms,
        })
    }
}

/// Writes run records as CSV with a header row.
pub fn write_csv<W: Write>(out: W, records: &[RunRecord]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> Result<(), BenchError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
