//! Exact-propagator spectral scheme for `u_tt = Δu + σ(u) Ẇ` on the torus.

mod average;
mod config;
mod engine;
mod sigma;
mod state;

pub use average::{psi_profile, spatial_average, AverageStencil, AverageWeight};
pub use config::{SolverConfig, SolverMode, DEFAULT_MEMORY_BUDGET};
pub use engine::{AverageObservation, LevelObservation, PathObservation, PicardObservation, Solver};
pub use sigma::Sigma;
pub use state::{kick, propagate_free, FieldState, Propagator};
