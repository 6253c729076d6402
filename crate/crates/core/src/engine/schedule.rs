use crate::num::Real;

use super::EngineError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScheduleKind {
    Linear,
    Cosine,
    Constant,
}

/// Temperature schedule over iterations `1..=steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealSchedule<R> {
    pub kind: ScheduleKind,
    pub t0: R,
    pub t1: R,
    pub steps: u64,
}

impl<R: Real> AnnealSchedule<R> {
    pub fn new(kind: ScheduleKind, t0: R, t1: R, steps: u64) -> Result<Self, EngineError> {
        let s = Self { kind, t0, t1, steps };
        s.validate()?;
        Ok(s)
    }

    pub fn linear(t0: R, t1: R, steps: u64) -> Result<Self, EngineError> {
        Self::new(ScheduleKind::Linear, t0, t1, steps)
    }

    pub fn cosine(t0: R, t1: R, steps: u64) -> Result<Self, EngineError> {
        Self::new(ScheduleKind::Cosine, t0, t1, steps)
    }

    pub fn constant(t: R, steps: u64) -> Result<Self, EngineError> {
        Self::new(ScheduleKind::Constant, t, t, steps)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let finite = self.t0.is_finite() && self.t1.is_finite();
        if !finite || self.t1 < R::zero() || self.t0 < self.t1 {
            return Err(EngineError::InvalidConfig(format!(
                "temperatures must satisfy t0 >= t1 >= 0, got t0={} t1={}",
                self.t0, self.t1
            )));
        }
        if self.kind == ScheduleKind::Constant && self.t0 != self.t1 {
            return Err(EngineError::InvalidConfig("constant schedule needs t0 == t1".into()));
        }
        if self.steps == 0 {
            return Err(EngineError::InvalidConfig("schedule needs at least one step".into()));
        }
        Ok(())
    }

    /// Temperature at iteration `t`, `1 <= t <= steps`.
    pub fn temperature(&self, t: u64) -> Result<R, EngineError> {
        if t == 0 || t > self.steps {
            return Err(EngineError::StepOutOfRange { t, steps: self.steps });
        }
        Ok(self.temperature_unchecked(t))
    }

    pub(crate) fn temperature_unchecked(&self, t: u64) -> R {
        if self.steps == 1 {
            return self.t0;
        }
        let frac = R::of((t - 1) as f64 / (self.steps - 1) as f64);
        match self.kind {
            ScheduleKind::Constant => self.t0,
            ScheduleKind::Linear => self.t0 + (self.t1 - self.t0) * frac,
            ScheduleKind::Cosine => {
                let half = R::of(0.5);
                self.t1 + (self.t0 - self.t1) * (R::one() + (R::PI() * frac).cos()) * half
            }
        }
    }
}
