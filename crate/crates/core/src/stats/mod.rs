//! Estimators that turn replicate ensembles into the limit-theorem checks.

mod distance;
mod ensemble;
pub mod moments;
mod picard;
mod tightness;
mod variance;

pub use distance::{
    bootstrap_interval, distance_estimate, kolmogorov_to_normal, normal_scores, percentile_interval, standardize,
    wasserstein_to_normal, DistanceEstimate,
};
pub use ensemble::{Ensemble, EnsembleMeta, PicardEnsemble};
pub use picard::{picard_gap, PicardRow, PicardSummary};
pub use tightness::{increment_moment, tightness_modulus, DoublingRow, TightnessReport, TightnessRow, RATIO_LIMIT};
pub use variance::{
    covariance_surface, estimated_limit, normalization, variance_scaling, CovarianceCell, CovarianceSurface,
    VarianceRow, MIN_COVARIANCE_REPLICATES, MIN_VARIANCE_REPLICATES,
};
