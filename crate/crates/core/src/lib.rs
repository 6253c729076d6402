//! Software Ising machine.
//!
//! Dense integer Ising instances are stored as signed bit planes, local
//! fields are initialized from Hamming weights and maintained incrementally
//! after each flip, and a dual-mode single-spin kernel (random scan or
//! roulette wheel) anneals the system. The [`oracle`] module provides
//! exhaustive reference computations for small instances and [`bench`]
//! handles benchmark instances and time-to-solution estimates.
//!
//! Temperatures and probabilities are generic over [`Real`]; the aliases
//! below fix the scalar to `f64` (or `f32`).

// `!(x > 0)` checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod bitplane;
pub mod engine;
pub mod model;
pub mod num;
pub mod oracle;
pub mod rng;

pub use bitplane::{BitPlaneMatrix, LocalFieldVector};
pub use engine::{run, Arithmetic, InitialState, Mode, RunReport, ScheduleKind};
pub use model::{IsingInstance, SpinState, WeightedGraph};
pub use num::Real;

pub type AnnealSchedule = engine::AnnealSchedule<f64>;
pub type EngineConfig = engine::EngineConfig<f64>;
pub type Chain<'a> = engine::Chain<'a, f64>;
pub type ExactDistribution = oracle::ExactDistribution<f64>;
pub type TransitionMatrix = oracle::TransitionMatrix<f64>;

pub type AnnealSchedule32 = engine::AnnealSchedule<f32>;
pub type EngineConfig32 = engine::EngineConfig<f32>;
pub type Chain32<'a> = engine::Chain<'a, f32>;
