//! Floating-point abstraction shared by the field solver and the analytic kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftNum;

/// Real scalar the spectral solver can run in: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FftNum + Default + Send + Sync + Debug + Display + 'static
{
    /// Lossy conversion from `f64` (exact for `f64`).
    fn of(x: f64) -> Self;

    /// One standard normal draw in this precision.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn as_f64(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }

    #[inline]
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}
