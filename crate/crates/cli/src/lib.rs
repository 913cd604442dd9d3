//! Experiment runner: configuration, orchestration and report emission.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

use std::path::{Path, PathBuf};

use config::{ExperimentConfig, Purpose};
use error::{CliError, Rule};
use report::{Meta, Outcome};

/// Validates, runs on a pool of `threads` workers (0 = all cores) and writes reports to `out`.
pub fn execute(
    purpose: Purpose,
    subcommand: &str,
    cfg: &ExperimentConfig,
    threads: usize,
    out: &Path,
    emit_plot_data: bool,
) -> Result<(Outcome, Vec<PathBuf>), CliError> {
    cfg.validate(purpose)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::new(Rule::Config, format!("thread pool: {e}")))?;
    let outcome = pool.install(|| experiments::run(purpose, cfg))?;
    let fingerprint = cfg.fingerprint();
    let meta = Meta {
        subcommand,
        fingerprint: &fingerprint,
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION"),
        timestamp: chrono::Utc::now().to_rfc3339(),
    };
    let written = report::write_outcome(out, &meta, &outcome, emit_plot_data)?;
    Ok((outcome, written))
}
