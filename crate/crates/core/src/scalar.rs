//! Floating-point scalar abstraction.
//!
//! Every numerical routine in the crate is generic over [`Scalar`], which
//! bundles the `num-traits` float surface with the special functions and
//! sampling hooks the library needs. `f64` is the recommended precision;
//! `f32` is supported for memory-bound experimentation but several default
//! tolerances in the library are calibrated for `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar with error functions and Gaussian sampling.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum<Self>
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Error function.
    fn erf(self) -> Self;

    /// Complementary error function (accurate in the far tail).
    fn erfc(self) -> Self;

    /// Standard normal CDF `Φ(t) = erfc(-t/√2)/2`.
    fn norm_cdf(self) -> Self {
        let half = Self::from_f64(0.5).unwrap();
        half * (-self / Self::SQRT_2()).erfc()
    }

    /// One standard normal draw.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lossy conversion from `f64`; panics on values unrepresentable as any
    /// float (never for finite inputs).
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 value not representable in scalar type")
    }

    /// Lossy conversion to `f64`.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar value not representable as f64")
    }

    /// Lossy conversion from `usize`.
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize value not representable in scalar type")
    }
}

impl Scalar for f64 {
    fn erf(self) -> Self {
        libm::erf(self)
    }

    fn erfc(self) -> Self {
        libm::erfc(self)
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Scalar for f32 {
    fn erf(self) -> Self {
        libm::erff(self)
    }

    fn erfc(self) -> Self {
        libm::erfcf(self)
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}
