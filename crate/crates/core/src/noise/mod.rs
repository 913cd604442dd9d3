//! Gaussian noise increments on a periodic grid: white in time, Riesz-correlated in space.

mod grid;
mod validate;
mod weights;

pub use grid::TorusGrid;
pub use validate::{covariance_validation, covariance_validation_against, CovarianceReport, LagCheck, MIN_DRAWS, Z_LIMIT};
pub use weights::{hermitian_gaussian, unit_cube_riesz_integral, NoiseIncrement, SpectralWeights, ZeroMode};
