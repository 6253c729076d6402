//! Glauber flip probability, exact and as a fixed-point lookup table.

use crate::num::Real;

use super::EngineError;

/// `1 / (1 + exp(dE / T))`.
pub fn logistic_exact<R: Real>(delta_e: i64, temperature: R) -> Result<R, EngineError> {
    if !(temperature > R::zero()) {
        return Err(EngineError::NonPositiveTemperature(temperature.as_f64()));
    }
    Ok(glauber(delta_e, temperature))
}

#[inline]
pub(crate) fn glauber<R: Real>(delta_e: i64, temperature: R) -> R {
    R::one() / (R::one() + (R::of_i64(delta_e) / temperature).exp())
}

/// Zero-temperature limit: downhill moves always, flat moves half the time.
#[inline]
pub(crate) fn frozen_limit<R: Real>(delta_e: i64) -> R {
    match delta_e.signum() {
        -1 => R::one(),
        0 => R::of(0.5),
        _ => R::zero(),
    }
}

/// Piecewise-linear fixed-point approximation of the logistic function.
///
/// Knots are evenly spaced over `[-z_max, z_max]` with one knot at zero.
/// Knot values are rounded to `frac_bits` fractional bits and mirrored so
/// that `lut(z) + lut(-z)` equals one up to a single output quantum. Values
/// saturate at `0` for `z >= z_max` and at `1 - 2^-frac_bits` for
/// `z <= -z_max`, so a flip is never certain at positive temperature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogisticTable {
    z_max: i64,
    width: i64,
    frac_bits: u32,
    knots: Vec<i64>,
}

impl Default for LogisticTable {
    fn default() -> Self {
        Self::new(16.0, 64, 16).expect("default table geometry is valid")
    }
}

impl LogisticTable {
    pub const DEFAULT_EPSILON: f64 = 1.0 / 128.0;

    pub fn new(z_max: f64, segments: u32, frac_bits: u32) -> Result<Self, EngineError> {
        let invalid = |msg: &str| Err(EngineError::InvalidConfig(format!("logistic table: {msg}")));
        if !(4..=30).contains(&frac_bits) {
            return invalid("frac_bits must be in 4..=30");
        }
        if segments < 2 || !segments.is_multiple_of(2) {
            return invalid("segment count must be even and at least 2");
        }
        let scale = (1u64 << frac_bits) as f64;
        let z_max_fx = z_max * scale;
        if !(z_max > 0.0) || z_max_fx.fract() != 0.0 || z_max_fx > (1u64 << 40) as f64 {
            return invalid("z_max must be positive and representable in fixed point");
        }
        let z_max_fx = z_max_fx as i64;
        if (2 * z_max_fx) % segments as i64 != 0 {
            return invalid("segment width must be a whole number of fixed-point steps");
        }
        let width = 2 * z_max_fx / segments as i64;
        let one = 1i64 << frac_bits;
        let half = segments as usize / 2;

        let mut knots = vec![0i64; segments as usize + 1];
        knots[half] = one / 2;
        for k in 1..=half {
            let z = (k as i64 * width) as f64 / scale;
            let upper = if k == half { 0 } else { (scale / (1.0 + z.exp())).round() as i64 };
            knots[half + k] = upper;
            knots[half - k] = (one - upper).min(one - 1);
        }
        Ok(Self { z_max: z_max_fx, width, frac_bits, knots })
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    /// Fixed-point representation of probability one.
    pub fn one(&self) -> u32 {
        1 << self.frac_bits
    }

    pub fn z_max(&self) -> f64 {
        self.z_max as f64 / self.scale()
    }

    pub fn segments(&self) -> usize {
        self.knots.len() - 1
    }

    /// `(z, p)` knots in fixed point.
    pub fn knots(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.knots.iter().enumerate().map(|(k, &v)| (-self.z_max + k as i64 * self.width, v as u32))
    }

    fn scale(&self) -> f64 {
        (1u64 << self.frac_bits) as f64
    }

    /// Table value at fixed-point `z`.
    pub fn eval_fixed(&self, z: i64) -> u32 {
        if z >= self.z_max {
            return 0;
        }
        if z <= -self.z_max {
            return self.knots[0] as u32;
        }
        let offset = z + self.z_max;
        let k = (offset / self.width) as usize;
        let dz = offset - k as i64 * self.width;
        let (a, b) = (self.knots[k], self.knots[k + 1]);
        let num = (b - a) as i128 * dz as i128;
        let w = self.width as i128;
        let interp = (num + w / 2).div_euclid(w) as i64;
        (a + interp) as u32
    }

    /// Quantizes a real `z` and evaluates the table.
    pub fn eval_z(&self, z: f64) -> u32 {
        self.eval_fixed(self.quantize_z(z))
    }

    fn quantize_z(&self, z: f64) -> i64 {
        let limit = self.z_max as f64;
        let q = (z * self.scale()).round();
        if q.is_nan() {
            0
        } else {
            q.clamp(-limit, limit) as i64
        }
    }

    /// Fixed-point flip probability for an energy change at temperature `T`.
    pub fn eval<R: Real>(&self, delta_e: i64, temperature: R) -> Result<u32, EngineError> {
        if !(temperature > R::zero()) {
            return Err(EngineError::NonPositiveTemperature(temperature.as_f64()));
        }
        Ok(self.eval_unchecked(delta_e, temperature.as_f64()))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, delta_e: i64, temperature: f64) -> u32 {
        self.eval_fixed(self.quantize_z(delta_e as f64 / temperature))
    }

    /// Fixed-point analogue of the zero-temperature limit.
    #[inline]
    pub(crate) fn frozen_limit(&self, delta_e: i64) -> u32 {
        match delta_e.signum() {
            -1 => self.one(),
            0 => self.one() / 2,
            _ => 0,
        }
    }

    /// Table value as a real probability.
    pub fn probability(&self, delta_e: i64, temperature: f64) -> Result<f64, EngineError> {
        Ok(self.eval(delta_e, temperature)? as f64 / self.scale())
    }
}

/// Fixed-point flip probability as a real number.
pub fn logistic_lut<R: Real>(delta_e: i64, temperature: R, table: &LogisticTable) -> Result<f64, EngineError> {
    table.probability(delta_e, temperature.as_f64())
}
