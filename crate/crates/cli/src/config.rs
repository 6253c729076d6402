//! Engine configuration assembled from flags, an optional flat key-value
//! file and defaults, in that order of precedence.

use std::collections::BTreeMap;
use std::path::Path;

use snowball_core::engine::ScheduleKind;
use snowball_core::rng::parse_seed;
use snowball_core::{AnnealSchedule, Arithmetic, EngineConfig, Mode};

use crate::args::{ArithArg, EngineArgs, ModeArg, ScheduleArg};
use crate::error::{CliError, CliResult};

pub const SEED_ENV: &str = "SNOWBALL_SEED";

const KEYS: [&str; 9] = ["mode", "schedule.kind", "t0", "t1", "steps", "seed", "arithmetic", "uniformized", "bitplanes"];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", k + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", k + 1)));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn bad(key: &str, value: &str) -> CliError {
    CliError::Usage(format!("config key {key}: invalid value {value:?}"))
}

fn lookup<T>(file: &BTreeMap<String, String>, key: &str, parse: impl Fn(&str) -> Option<T>) -> CliResult<Option<T>> {
    file.get(key).map(|v| parse(v).ok_or_else(|| bad(key, v))).transpose()
}

/// Resolves the engine configuration for an instance with `n` spins whose
/// couplings need `min_planes` bit planes.
pub fn engine_config(args: &EngineArgs, n: usize, min_planes: u32) -> CliResult<EngineConfig> {
    let file = match &args.config {
        Some(path) => parse_config(&read_config(path)?)?,
        None => BTreeMap::new(),
    };
    let mode = match args.mode {
        Some(m) => m,
        None => lookup(&file, "mode", ModeArg::from_str_value)?.unwrap_or(ModeArg::RandomScan),
    };
    let kind = match args.schedule {
        Some(s) => s,
        None => lookup(&file, "schedule.kind", ScheduleArg::from_str_value)?.unwrap_or(ScheduleArg::Linear),
    };
    let arith = match args.arith {
        Some(a) => a,
        None => lookup(&file, "arithmetic", ArithArg::from_str_value)?.unwrap_or(ArithArg::Exact),
    };
    let t0 = pick(args.t0, &file, "t0", |v| v.parse().ok())?.unwrap_or(10.0);
    let t1 = match (args.t1, kind) {
        (Some(t), _) => t,
        (None, _) if file.contains_key("t1") => lookup(&file, "t1", |v| v.parse().ok())?.unwrap_or(0.05),
        (None, ScheduleArg::Constant) => t0,
        (None, _) => 0.05,
    };
    let steps = pick(args.steps, &file, "steps", |v| v.parse().ok())?.unwrap_or(50 * n.max(1) as u64);
    let bitplanes = pick(args.bitplanes, &file, "bitplanes", |v| v.parse().ok())?.unwrap_or(min_planes.max(2));
    let seed = match pick(args.seed, &file, "seed", |v| parse_seed(v).ok())? {
        Some(s) => s,
        None => env_seed()?.unwrap_or(1),
    };
    let uniformized = args.uniformized || lookup(&file, "uniformized", parse_bool)?.unwrap_or(false);

    let kind = match kind {
        ScheduleArg::Linear => ScheduleKind::Linear,
        ScheduleArg::Cosine => ScheduleKind::Cosine,
        ScheduleArg::Constant => ScheduleKind::Constant,
    };
    let schedule = AnnealSchedule::new(kind, t0, t1, steps).map_err(|e| CliError::Usage(e.to_string()))?;
    let cfg = EngineConfig::new(schedule)
        .with_mode(match mode {
            ModeArg::RandomScan => Mode::RandomScan,
            ModeArg::Roulette => Mode::Roulette,
        })
        .with_arithmetic(match arith {
            ArithArg::Exact => Arithmetic::Exact,
            ArithArg::Lut => Arithmetic::HardwareLut,
        })
        .with_bitplanes(bitplanes)
        .with_uniformized(uniformized)
        .with_seed(seed);
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn pick<T>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str, parse: impl Fn(&str) -> Option<T>) -> CliResult<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => lookup(file, key, parse),
    }
}

fn env_seed() -> CliResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => parse_seed(&v).map(Some).map_err(|_| CliError::Usage(format!("{SEED_ENV}: invalid seed {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

fn read_config(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))
}

trait FromStrValue: Sized {
    fn from_str_value(v: &str) -> Option<Self>;
}

impl<T: clap::ValueEnum> FromStrValue for T {
    fn from_str_value(v: &str) -> Option<Self> {
        T::from_str(v, true).ok()
    }
}
