//! Spectral Monte Carlo for the stochastic wave equation with Riesz-correlated noise.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fft;
pub mod kernels;
pub mod noise;
pub mod oracle;
pub mod quad;
pub mod rng;
pub mod scalar;
pub mod solver;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Solver64 = solver::Solver<f64>;
pub type Solver32 = solver::Solver<f32>;
pub type FieldState64 = solver::FieldState<f64>;
pub type FieldState32 = solver::FieldState<f32>;
