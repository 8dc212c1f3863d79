//! Scalar abstraction: the whole crate is generic over the working precision.

use num_traits::{Float, FloatConst, NumAssign, ToPrimitive};
use rustfft::FftNum;
use serde::{de::DeserializeOwned, Serialize};
use std::fmt::{Display, LowerExp};
use std::iter::Sum;

/// Floating-point scalar usable for both physical samples and Fourier
/// coefficients. Implemented for `f32` and `f64`; all shipped binaries and
/// tests run `f64`.
pub trait Real:
    FftNum
    + Float
    + FloatConst
    + NumAssign
    + ToPrimitive
    + Sum<Self>
    + LowerExp
    + Display
    + Serialize
    + DeserializeOwned
{
    /// Lossy conversion from `f64` literals and tolerances.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    fn to64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
