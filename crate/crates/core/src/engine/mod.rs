//! Dual-mode single-spin annealing kernel.
//!
//! Mode I (random scan) proposes a uniformly chosen spin and accepts it
//! with its Glauber probability. Mode II (roulette wheel) evaluates every
//! flip probability from the current fields, picks one spin in proportion
//! to its probability and flips it unconditionally. Both modes change at
//! most one spin per iteration and propagate the flip through the
//! column-major bit planes.

mod chain;
mod logistic;
mod schedule;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bitplane::{BitPlaneError, BitPlaneMatrix};
use crate::model::{cut_from_energy, IsingInstance, ModelError, SpinState};
use crate::num::Real;

pub use chain::{step_naive_sync, Chain, RouletteDraw, StepOutcome};
pub use logistic::{logistic_exact, logistic_lut, LogisticTable};
pub use schedule::{AnnealSchedule, ScheduleKind};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
    #[error("iteration {t} outside 1..={steps}")]
    StepOutOfRange { t: u64, steps: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    BitPlane(#[from] BitPlaneError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    RandomScan,
    Roulette,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arithmetic {
    /// Floating point logistic, compensated roulette sums.
    Exact,
    /// Fixed-point lookup table, integer roulette sums.
    HardwareLut,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig<R> {
    pub mode: Mode,
    pub uniformized: bool,
    pub arithmetic: Arithmetic,
    pub schedule: AnnealSchedule<R>,
    pub seed: u64,
    pub record_trace: bool,
    pub trace_stride: u64,
    pub bitplanes: u32,
}

impl<R: Real> EngineConfig<R> {
    /// Random scan, exact arithmetic, two bit planes, seed 1.
    pub fn new(schedule: AnnealSchedule<R>) -> Self {
        Self {
            mode: Mode::RandomScan,
            uniformized: false,
            arithmetic: Arithmetic::Exact,
            schedule,
            seed: 1,
            record_trace: false,
            trace_stride: 1,
            bitplanes: 2,
        }
    }

    /// Linear cooling from 10 to 0.05 over `50 n` iterations.
    pub fn defaults_for(n: usize) -> Self {
        let schedule = AnnealSchedule::linear(R::of(10.0), R::of(0.05), 50 * n.max(1) as u64)
            .expect("default schedule is valid");
        Self::new(schedule)
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_arithmetic(mut self, arithmetic: Arithmetic) -> Self {
        self.arithmetic = arithmetic;
        self
    }

    pub fn with_bitplanes(mut self, bitplanes: u32) -> Self {
        self.bitplanes = bitplanes;
        self
    }

    pub fn with_uniformized(mut self, uniformized: bool) -> Self {
        self.uniformized = uniformized;
        self
    }

    pub fn with_trace(mut self, stride: u64) -> Self {
        self.record_trace = true;
        self.trace_stride = stride;
        self
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        self.schedule.validate()?;
        if self.trace_stride == 0 {
            return Err(EngineError::InvalidConfig("trace stride must be positive".into()));
        }
        if self.uniformized && self.mode != Mode::Roulette {
            return Err(EngineError::InvalidConfig("uniformization requires roulette mode".into()));
        }
        Ok(())
    }
}

/// Starting configuration for [`run`].
#[derive(Clone, Debug)]
pub enum InitialState {
    /// Uniformly random, derived from the run seed.
    Random,
    Given(SpinState),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TracePoint {
    pub t: u64,
    pub energy: i64,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub best_energy: i64,
    pub best_state: SpinState,
    /// Cut weight of the best state when the instance encodes a Max-Cut graph.
    pub best_cut: Option<i64>,
    pub final_energy: i64,
    pub final_state: SpinState,
    pub energy_trace: Vec<TracePoint>,
    pub steps: u64,
    pub seed: u64,
    pub flip_count: u64,
    pub fallback_count: u64,
    pub null_transition_count: u64,
    /// Field initialization plus the iteration loop.
    pub kernel_time: Duration,
    /// Kernel time plus bit-plane encoding.
    pub total_time: Duration,
}

/// Field coherence is rechecked this often in debug builds.
const COHERENCE_INTERVAL: u64 = 4096;

/// Anneals `instance` for `cfg.schedule.steps` iterations.
pub fn run<R: Real>(instance: &IsingInstance, cfg: &EngineConfig<R>, initial: InitialState) -> Result<RunReport, EngineError> {
    cfg.validate()?;
    let start = Instant::now();
    let planes = BitPlaneMatrix::from_instance(instance, cfg.bitplanes)?;
    let table = match cfg.arithmetic {
        Arithmetic::Exact => None,
        Arithmetic::HardwareLut => Some(LogisticTable::default()),
    };
    let state = match initial {
        InitialState::Random => SpinState::random(instance.n(), cfg.seed),
        InitialState::Given(s) => s,
    };

    let kernel_start = Instant::now();
    let mut chain = Chain::<R>::new(instance, &planes, state, cfg.seed, table.as_ref())?;
    let mut best_energy = chain.energy();
    let mut best_state = chain.state().clone();
    let mut trace = Vec::new();
    let (mut flips, mut fallbacks, mut nulls) = (0u64, 0u64, 0u64);

    for t in 1..=cfg.schedule.steps {
        let temp = cfg.schedule.temperature_unchecked(t);
        // One temperature per iteration, so the stage index is t itself.
        let outcome = match cfg.mode {
            Mode::RandomScan => chain.step_random_scan(temp, t, t),
            Mode::Roulette => chain.step_roulette(temp, t, t, cfg.uniformized),
        };
        match outcome {
            StepOutcome::Flipped { fallback, .. } => {
                flips += 1;
                fallbacks += fallback as u64;
                if chain.energy() < best_energy {
                    best_energy = chain.energy();
                    best_state.clone_from(chain.state());
                }
            }
            StepOutcome::Rejected { fallback, .. } => fallbacks += fallback as u64,
            StepOutcome::Null => nulls += 1,
        }
        if cfg.record_trace && t % cfg.trace_stride == 0 {
            trace.push(TracePoint { t, energy: chain.energy() });
        }
        if cfg!(debug_assertions) && t % COHERENCE_INTERVAL == 0 {
            debug_assert!(chain.fields_consistent(), "local fields diverged at iteration {t}");
        }
    }
    let kernel_time = kernel_start.elapsed();

    let final_energy = chain.energy();
    Ok(RunReport {
        best_energy,
        best_cut: instance.total_weight().map(|w| cut_from_energy(w, best_energy)),
        best_state,
        final_energy,
        final_state: chain.into_state(),
        energy_trace: trace,
        steps: cfg.schedule.steps,
        seed: cfg.seed,
        flip_count: flips,
        fallback_count: fallbacks,
        null_transition_count: nulls,
        kernel_time,
        total_time: start.elapsed(),
    })
}
