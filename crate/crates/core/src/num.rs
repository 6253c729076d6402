//! Scalar abstraction for temperatures, probabilities and distributions.
//!
//! Couplings, biases, energies and local fields are always exact `i64`
//! values. Everything that is inherently real-valued (temperatures, flip
//! probabilities, Gibbs weights, transition matrices) is generic over
//! [`Real`] so the same kernel can be driven in `f32` or `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar used for temperatures and probabilities.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; used for constants and user input.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Real")
    }

    /// Lossless-enough conversion to `f64` for reporting and comparisons.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    /// Integer energies enter probability formulas through this.
    fn of_i64(x: i64) -> Self {
        Self::from_i64(x).expect("i64 is representable in every Real")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Neumaier compensated running sum.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<R> {
    sum: R,
    carry: R,
}

impl<R: Real> Default for CompensatedSum<R> {
    fn default() -> Self {
        Self { sum: R::zero(), carry: R::zero() }
    }
}

impl<R: Real> CompensatedSum<R> {
    pub fn add(&mut self, x: R) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> R {
        self.sum + self.carry
    }
}
