use crate::bitplane::{BitPlaneMatrix, LocalFieldVector};
use crate::model::{IsingInstance, SpinState};
use crate::num::{CompensatedSum, Real};
use crate::rng::{draw_u32, site_index, unit_uniform, RandomContext, Salt};

use super::logistic::{frozen_limit, glauber, LogisticTable};
use super::EngineError;

/// What a single iteration did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    /// Spin `site` flipped, changing the energy by `delta_e`.
    Flipped { site: usize, delta_e: i64, fallback: bool },
    /// A random-scan proposal for `site` was rejected.
    Rejected { site: usize, fallback: bool },
    /// Uniformized null transition: no spin was considered for flipping.
    Null,
}

impl StepOutcome {
    pub fn flipped_site(&self) -> Option<usize> {
        match *self {
            StepOutcome::Flipped { site, .. } => Some(site),
            _ => None,
        }
    }

    pub fn is_fallback(&self) -> bool {
        matches!(
            self,
            StepOutcome::Flipped { fallback: true, .. } | StepOutcome::Rejected { fallback: true, .. }
        )
    }
}

/// Result of the roulette-wheel selection phase, before any flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouletteDraw {
    Selected(usize),
    /// Uniformized variant chose not to flip.
    Null,
    /// Total weight was zero or not finite.
    Degenerate,
}

/// One Markov chain: spin state plus incrementally maintained fields over a
/// shared instance and its bit-plane encoding.
pub struct Chain<'a, R: Real> {
    instance: &'a IsingInstance,
    planes: &'a BitPlaneMatrix,
    table: Option<&'a LogisticTable>,
    fields: LocalFieldVector,
    state: SpinState,
    energy: i64,
    seed: u64,
    weights: Vec<R>,
    fixed_weights: Vec<u32>,
}

impl<'a, R: Real> Chain<'a, R> {
    /// Initializes the local fields from `state` with the row-major planes.
    /// Passing a table selects fixed-point probabilities.
    pub fn new(
        instance: &'a IsingInstance,
        planes: &'a BitPlaneMatrix,
        state: SpinState,
        seed: u64,
        table: Option<&'a LogisticTable>,
    ) -> Result<Self, EngineError> {
        if planes.n() != instance.n() {
            return Err(EngineError::InvalidConfig("bit planes do not match the instance".into()));
        }
        let fields = planes.init_local_fields(&state, instance.biases())?;
        let energy = instance.energy(&state)?;
        Ok(Self {
            instance,
            planes,
            table,
            fields,
            state,
            energy,
            seed,
            weights: Vec::new(),
            fixed_weights: Vec::new(),
        })
    }

    pub fn state(&self) -> &SpinState {
        &self.state
    }

    pub fn into_state(self) -> SpinState {
        self.state
    }

    pub fn fields(&self) -> &LocalFieldVector {
        &self.fields
    }

    /// Current energy, tracked through the flip deltas.
    pub fn energy(&self) -> i64 {
        self.energy
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    /// `ΔE_i = 2 s_i (u_i^(J) + h_i)` from the maintained fields.
    #[inline]
    pub fn delta_e(&self, i: usize) -> i64 {
        2 * self.state.spin(i) * self.fields.field(i)
    }

    /// Compares the maintained fields against a from-scratch initialization.
    pub fn fields_consistent(&self) -> bool {
        self.planes
            .init_local_fields(&self.state, self.instance.biases())
            .map(|fresh| fresh.same_fields(&self.fields))
            .unwrap_or(false)
    }

    fn rand(&self, stage: u64, iteration: u64, salt: Salt) -> u32 {
        draw_u32(RandomContext::new(self.seed, stage, iteration, salt))
    }

    /// Flips spin `j`: caches the pre-flip value, toggles the bit and
    /// propagates the change through column `j`.
    pub fn flip(&mut self, j: usize) -> i64 {
        let delta = self.delta_e(j);
        let old = self.state.spin(j);
        self.state.flip(j);
        self.planes.apply_column(&mut self.fields, j, old);
        self.energy += delta;
        delta
    }

    /// Glauber flip probability of spin `i` as a real number.
    pub fn flip_probability(&self, i: usize, temperature: R) -> f64 {
        let de = self.delta_e(i);
        match self.table {
            Some(t) => {
                let p = if temperature > R::zero() {
                    t.eval_unchecked(de, temperature.as_f64())
                } else {
                    t.frozen_limit(de)
                };
                p as f64 / t.one() as f64
            }
            None => {
                let p: R = if temperature > R::zero() { glauber(de, temperature) } else { frozen_limit(de) };
                p.as_f64()
            }
        }
    }

    /// Random-scan Glauber step: uniform site, accept with its flip
    /// probability.
    pub fn step_random_scan(&mut self, temperature: R, stage: u64, iteration: u64) -> StepOutcome {
        self.random_scan(temperature, stage, iteration, false)
    }

    fn random_scan(&mut self, temperature: R, stage: u64, iteration: u64, fallback: bool) -> StepOutcome {
        let site = site_index(self.rand(stage, iteration, Salt::SiteSelect), self.n());
        let v = self.rand(stage, iteration, Salt::AcceptTest);
        let de = self.delta_e(site);
        let accept = match self.table {
            Some(t) => {
                let p = if temperature > R::zero() {
                    t.eval_unchecked(de, temperature.as_f64())
                } else {
                    t.frozen_limit(de)
                };
                (v as u64) < (p as u64) << (32 - t.frac_bits())
            }
            None => {
                let p: R = if temperature > R::zero() { glauber(de, temperature) } else { frozen_limit(de) };
                unit_uniform(v) < p.as_f64()
            }
        };
        if accept {
            let delta_e = self.flip(site);
            StepOutcome::Flipped { site, delta_e, fallback }
        } else {
            StepOutcome::Rejected { site, fallback }
        }
    }

    /// Roulette-wheel selection over all sites from the current fields.
    /// Does not modify the spin state.
    pub fn roulette_draw(&mut self, temperature: R, stage: u64, iteration: u64, uniformized: bool) -> RouletteDraw {
        let n = self.n();
        let hot = temperature > R::zero();
        match self.table {
            Some(t) => {
                let mut weights = std::mem::take(&mut self.fixed_weights);
                weights.clear();
                weights.extend((0..n).map(|i| {
                    let de = self.delta_e(i);
                    if hot {
                        t.eval_unchecked(de, temperature.as_f64())
                    } else {
                        t.frozen_limit(de)
                    }
                }));
                let total: u64 = weights.iter().map(|&w| w as u64).sum();
                let draw = self.select_fixed(&weights, total, t.frac_bits(), stage, iteration, uniformized);
                self.fixed_weights = weights;
                draw
            }
            None => {
                let mut weights = std::mem::take(&mut self.weights);
                weights.clear();
                weights.extend((0..n).map(|i| {
                    let de = self.delta_e(i);
                    if hot {
                        glauber::<R>(de, temperature)
                    } else {
                        frozen_limit::<R>(de)
                    }
                }));
                let mut acc = CompensatedSum::default();
                for &w in &weights {
                    acc.add(w);
                }
                let total = acc.value();
                let draw = self.select_real(&weights, total, stage, iteration, uniformized);
                self.weights = weights;
                draw
            }
        }
    }

    fn select_real(&self, weights: &[R], total: R, stage: u64, iteration: u64, uniformized: bool) -> RouletteDraw {
        if !(total > R::zero()) || !total.is_finite() {
            return RouletteDraw::Degenerate;
        }
        if uniformized {
            let v = unit_uniform(self.rand(stage, iteration, Salt::Uniformize));
            if v >= total.as_f64() / weights.len() as f64 {
                return RouletteDraw::Null;
            }
        }
        let r = R::of(unit_uniform(self.rand(stage, iteration, Salt::RouletteDraw))) * total;
        let mut acc = CompensatedSum::default();
        let mut last_positive = 0;
        for (j, &w) in weights.iter().enumerate() {
            if w > R::zero() {
                last_positive = j;
            }
            acc.add(w);
            if r < acc.value() && w > R::zero() {
                return RouletteDraw::Selected(j);
            }
        }
        // r rounded up to the total.
        RouletteDraw::Selected(last_positive)
    }

    fn select_fixed(
        &self,
        weights: &[u32],
        total: u64,
        frac_bits: u32,
        stage: u64,
        iteration: u64,
        uniformized: bool,
    ) -> RouletteDraw {
        if total == 0 {
            return RouletteDraw::Degenerate;
        }
        if uniformized {
            let v = self.rand(stage, iteration, Salt::Uniformize) as u128;
            // flip iff v / 2^32 < total / (n 2^frac)
            if v * ((weights.len() as u128) << frac_bits) >= (total as u128) << 32 {
                return RouletteDraw::Null;
            }
        }
        let r = ((self.rand(stage, iteration, Salt::RouletteDraw) as u128 * total as u128) >> 32) as u64;
        let mut cum = 0u64;
        for (j, &w) in weights.iter().enumerate() {
            cum += w as u64;
            if r < cum {
                return RouletteDraw::Selected(j);
            }
        }
        unreachable!("r < total by construction")
    }

    /// Roulette-wheel step. A degenerate total weight falls back to a
    /// random-scan step, or is a null transition when uniformized.
    pub fn step_roulette(&mut self, temperature: R, stage: u64, iteration: u64, uniformized: bool) -> StepOutcome {
        match self.roulette_draw(temperature, stage, iteration, uniformized) {
            RouletteDraw::Selected(site) => {
                let delta_e = self.flip(site);
                StepOutcome::Flipped { site, delta_e, fallback: false }
            }
            RouletteDraw::Null => StepOutcome::Null,
            RouletteDraw::Degenerate if uniformized => StepOutcome::Null,
            RouletteDraw::Degenerate => self.random_scan(temperature, stage, iteration, true),
        }
    }

    /// Last computed roulette weights in real arithmetic.
    pub fn last_weights(&self) -> &[R] {
        &self.weights
    }
}

/// All spins updated at once from the previous state's fields, each with
/// its own Glauber probability. Does not preserve the Gibbs distribution.
pub fn step_naive_sync<R: Real>(
    instance: &IsingInstance,
    state: &SpinState,
    temperature: R,
    seed: u64,
    iteration: u64,
) -> Result<SpinState, EngineError> {
    let fields = instance.local_fields(state)?;
    let mut next = state.clone();
    for (i, u) in fields.into_iter().enumerate() {
        let de = 2 * state.spin(i) * u;
        let p: R = if temperature > R::zero() { glauber(de, temperature) } else { frozen_limit(de) };
        let v = draw_u32(RandomContext::new(seed, iteration, i as u64, Salt::AcceptTest));
        if unit_uniform(v) < p.as_f64() {
            next.flip(i);
        }
    }
    Ok(next)
}
