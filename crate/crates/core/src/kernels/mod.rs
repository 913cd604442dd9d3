//! Pure analytic building blocks.

pub mod limit;
pub mod mollifier;
pub mod riesz;
pub mod special;
pub mod wave;

pub use limit::LimitFunctional;
pub use mollifier::MollifierFamily;
pub use riesz::{riesz_constant, tau_beta, RieszKernel};
pub use wave::{multiplier_bound_suite, wave_multiplier, BesselMultiplier, BoundReport};
