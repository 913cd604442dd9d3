//! One function per subcommand. Each validates its config, samples, and returns tables plus
//! verdicts; writing files is the caller's business.

mod ensemble;
mod kernels;
mod noise;
mod oracle;
mod picard;

use rayon::prelude::*;
use swe_core::kernels::{tau_beta, LimitFunctional};
use swe_core::noise::SpectralWeights;
use swe_core::scalar::Scalar;
use swe_core::solver::{PathObservation, PicardObservation, Solver, SolverConfig};
use swe_core::stats::{estimated_limit, Ensemble, EnsembleMeta};

use crate::config::{ExperimentConfig, Precision, Purpose};
use crate::error::CliError;
use crate::report::Outcome;

pub use ensemble::{clt, clt_report, fclt, fclt_report, simulate};
pub use kernels::kernels_check;
pub use noise::noise_validate;
pub use oracle::oracle_compare;
pub use picard::picard;

/// Validates `cfg` for `purpose` and runs the matching experiment on the current rayon pool.
pub fn run(purpose: Purpose, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    cfg.validate(purpose)?;
    match purpose {
        Purpose::Kernels => kernels_check(cfg),
        Purpose::Noise => noise_validate(cfg),
        Purpose::Simulate => simulate(cfg),
        Purpose::Clt => clt(cfg),
        Purpose::Fclt => fclt(cfg),
        Purpose::Picard => picard(cfg),
        Purpose::Oracle => oracle_compare(cfg),
    }
}

pub(crate) fn meta(cfg: &ExperimentConfig) -> EnsembleMeta {
    EnsembleMeta {
        fingerprint: cfg.fingerprint(),
        seed: cfg.seed,
    }
}

/// Replicate paths in replicate order, whatever the pool size.
pub(crate) fn direct_paths(cfg: &ExperimentConfig, weights: &SpectralWeights) -> Result<Vec<PathObservation>, CliError> {
    let solver_cfg = cfg.solver_config()?;
    match cfg.precision {
        Precision::F64 => paths::<f64>(solver_cfg, weights, cfg.seed, cfg.replicates),
        Precision::F32 => paths::<f32>(solver_cfg, weights, cfg.seed, cfg.replicates),
    }
}

fn paths<S: Scalar>(
    cfg: SolverConfig,
    weights: &SpectralWeights,
    seed: u64,
    replicates: usize,
) -> Result<Vec<PathObservation>, CliError> {
    let solver = Solver::<S>::new(cfg, weights, seed)?;
    Ok((0..replicates as u64).into_par_iter().map(|r| solver.solve_path(r)).collect())
}

pub(crate) fn picard_paths(cfg: &ExperimentConfig, weights: &SpectralWeights) -> Result<Vec<PicardObservation>, CliError> {
    let solver_cfg = cfg.solver_config()?;
    match cfg.precision {
        Precision::F64 => coupled::<f64>(solver_cfg, weights, cfg.seed, cfg.replicates),
        Precision::F32 => coupled::<f32>(solver_cfg, weights, cfg.seed, cfg.replicates),
    }
}

fn coupled<S: Scalar>(
    cfg: SolverConfig,
    weights: &SpectralWeights,
    seed: u64,
    replicates: usize,
) -> Result<Vec<PicardObservation>, CliError> {
    let solver = Solver::<S>::new(cfg, weights, seed)?;
    let runs: Result<Vec<_>, _> = (0..replicates as u64).into_par_iter().map(|r| solver.picard_path(r)).collect();
    Ok(runs?)
}

/// Samples the direct-scheme ensemble described by `cfg`.
pub fn ensemble(cfg: &ExperimentConfig) -> Result<(SpectralWeights, Ensemble), CliError> {
    let weights = cfg.weights()?;
    let paths = direct_paths(cfg, &weights)?;
    let ens = Ensemble::from_paths(meta(cfg), cfg.record_times.clone(), &paths)?;
    Ok((weights, ens))
}

/// Exact limit functional for constant σ, plug-in from the center trace otherwise.
pub(crate) fn limit_functional(cfg: &ExperimentConfig, ens: &Ensemble) -> Result<LimitFunctional, CliError> {
    let riesz = cfg.riesz()?;
    let lf = match cfg.sigma.constant_value() {
        Some(c) => LimitFunctional::constant(riesz, c, *cfg.record_times.last().unwrap_or(&0.0))?,
        None => estimated_limit(ens, riesz, tau_beta(cfg.dim, cfg.beta)?)?,
    };
    Ok(lf)
}

/// Time index of the last record time.
pub(crate) fn last(cfg: &ExperimentConfig) -> usize {
    cfg.record_times.len() - 1
}

pub(crate) fn fmt_shift(shift: &[i64]) -> String {
    shift.iter().map(i64::to_string).collect::<Vec<_>>().join(";")
}

pub(crate) fn sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}
