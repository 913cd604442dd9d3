use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Dalang condition violated: beta = {beta} must satisfy 0 < beta < min(2, d) = {bound} (d = {dim})")]
    Dalang { dim: usize, beta: f64, bound: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("wraparound rule violated: half-period L = {half_period} must be >= R_max + T + 2 = {required}")]
    Wraparound { half_period: f64, required: f64 },

    #[error("quadrature did not converge: {context} (estimate {estimate:e}, relative disagreement {disagreement:e})")]
    Quadrature {
        context: String,
        estimate: f64,
        disagreement: f64,
    },

    #[error("CFL condition violated: dt = {dt} > dx / sqrt(d) = {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("insufficient replicates: {have} available, {need} required for {what}")]
    InsufficientReplicates {
        have: usize,
        need: usize,
        what: &'static str,
    },

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("ensembles are not coupled: {0}")]
    SeedMismatch(String),

    #[error("memory guard: {requested} bytes requested, budget is {budget} bytes")]
    MemoryBudget { requested: u64, budget: u64 },

    #[error("covariance matrix is not positive semidefinite: {0}")]
    NotPsd(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
