//! Experiment configuration: JSON in, validated core objects out.
//!
//! Every field has a fixed meaning across subcommands. The fingerprint is the SHA-256 of
//! the canonical JSON form (keys sorted, defaults filled in), so two configs that differ
//! only in whitespace or key order hash identically.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use swe_core::kernels::RieszKernel;
use swe_core::noise::{SpectralWeights, TorusGrid, ZeroMode};
use swe_core::solver::{Sigma, SolverConfig, SolverMode, DEFAULT_MEMORY_BUDGET};
use swe_core::stats::{MIN_COVARIANCE_REPLICATES, MIN_VARIANCE_REPLICATES};

use crate::error::{CliError, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    F32,
    #[default]
    F64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub half_period: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BootstrapSpec {
    pub resamples: usize,
    pub level: f64,
}

impl Default for BootstrapSpec {
    fn default() -> Self {
        Self {
            resamples: 400,
            level: 0.95,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSpec {
    pub draws: usize,
    /// Cell shifts to test; empty means unit shifts along each axis and the diagonal.
    pub shifts: Vec<Vec<i64>>,
    /// Also compare the analytic covariances with a grid of twice the period.
    pub periodization: bool,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            draws: 10_000,
            shifts: Vec::new(),
            periodization: true,
        }
    }
}

/// Pass/fail thresholds. Relative tolerances are fractions, `*_se` are multiples of the
/// relevant standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub variance_rel: f64,
    pub variance_se: f64,
    pub covariance_rel: f64,
    pub covariance_se: f64,
    pub wasserstein_max: f64,
    pub kolmogorov_se: f64,
    pub doubling_se: f64,
    pub picard_rel: f64,
    pub oracle_se: f64,
    pub dense_rel: f64,
    pub noise_z: f64,
    pub periodization_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            variance_rel: 0.03,
            variance_se: 3.0,
            covariance_rel: 0.05,
            covariance_se: 3.0,
            wasserstein_max: 0.05,
            kolmogorov_se: 3.0,
            doubling_se: 3.0,
            picard_rel: 0.05,
            oracle_se: 4.0,
            dense_rel: 0.05,
            noise_z: 4.0,
            periodization_rel: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub beta: f64,
    pub sigma: Sigma,
    pub grid: GridSpec,
    #[serde(default)]
    pub zero_mode: ZeroMode,
    pub dt: f64,
    pub horizon: f64,
    pub record_times: Vec<f64>,
    pub radii: Vec<f64>,
    pub replicates: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "direct")]
    pub mode: SolverMode,
    #[serde(default)]
    pub precision: Precision,
    /// Also record ψ_R-weighted averages.
    #[serde(default)]
    pub smoothed: bool,
    #[serde(default = "default_budget")]
    pub memory_budget: u64,
    #[serde(default)]
    pub bootstrap: BootstrapSpec,
    #[serde(default)]
    pub noise: NoiseSpec,
    /// Draws for the multiplier bound suite.
    #[serde(default = "default_bound_samples")]
    pub bound_samples: usize,
    /// Radius index used by the covariance surface and the Picard average gap; defaults to
    /// the largest radius.
    #[serde(default)]
    pub focus_radius: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn direct() -> SolverMode {
    SolverMode::Direct
}

fn default_budget() -> u64 {
    DEFAULT_MEMORY_BUDGET
}

fn default_bound_samples() -> usize {
    100_000
}

/// What a subcommand needs from the config beyond the common rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Kernels,
    Noise,
    Simulate,
    Clt,
    Fclt,
    Picard,
    Oracle,
}

/// Dense covariance oracle size caps, by dimension.
pub const DENSE_MAX_N: [usize; 2] = [32, 16];

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::new(Rule::Config, format!("{}: {e}", path.display())))
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn fingerprint(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let canonical = serde_json::to_string(&value).expect("value serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn riesz(&self) -> Result<RieszKernel, CliError> {
        Ok(RieszKernel::new(self.dim, self.beta)?)
    }

    pub fn torus(&self) -> Result<TorusGrid, CliError> {
        Ok(TorusGrid::new(self.dim, self.grid.n, self.grid.half_period)?)
    }

    pub fn weights(&self) -> Result<SpectralWeights, CliError> {
        Ok(SpectralWeights::build(self.torus()?, self.riesz()?, self.zero_mode)?)
    }

    pub fn solver_config(&self) -> Result<SolverConfig, CliError> {
        let mut cfg = SolverConfig::direct(
            self.torus()?,
            self.dt,
            self.horizon,
            self.sigma,
            self.record_times.clone(),
            self.radii.clone(),
        );
        cfg.mode = self.mode;
        cfg.smoothed = self.smoothed;
        cfg.memory_budget = self.memory_budget;
        Ok(cfg)
    }

    pub fn focus(&self) -> usize {
        self.focus_radius.unwrap_or(self.radii.len().saturating_sub(1))
    }

    pub fn bytes_per_real(&self) -> u64 {
        match self.precision {
            Precision::F32 => 4,
            Precision::F64 => 8,
        }
    }

    /// Checks every precondition the subcommand will hit, before any sampling.
    pub fn validate(&self, purpose: Purpose) -> Result<(), CliError> {
        self.riesz()?;
        self.torus()?;
        if purpose == Purpose::Kernels {
            return check(self.bound_samples >= 1, Rule::Config, "bound_samples must be positive");
        }
        if purpose == Purpose::Noise {
            check(self.dt > 0.0 && self.dt.is_finite(), Rule::Config, "dt must be positive")?;
            for s in &self.noise.shifts {
                check(s.len() == self.dim, Rule::Config, "every noise shift needs one entry per axis")?;
            }
            return Ok(());
        }
        let cfg = self.solver_config()?;
        cfg.validate()?;
        cfg.check_memory(self.bytes_per_real())?;
        check(self.replicates >= 2, Rule::Replicates, "at least 2 replicates are required")?;
        check(self.focus() < self.radii.len(), Rule::Config, "focus_radius is out of range")?;
        let sigma_at_one: f64 = self.sigma.eval(1.0);
        match purpose {
            Purpose::Clt | Purpose::Fclt => {
                check(
                    sigma_at_one != 0.0,
                    Rule::SigmaAtOne,
                    "sigma(1) must be non-zero for the limit theorems",
                )?;
                check(
                    self.record_times.first() == Some(&0.0),
                    Rule::Config,
                    "record_times must start at 0 so the limit functional can be tabulated",
                )?;
                let need = if purpose == Purpose::Clt {
                    MIN_VARIANCE_REPLICATES
                } else {
                    MIN_COVARIANCE_REPLICATES
                };
                check(
                    self.replicates >= need,
                    Rule::Replicates,
                    format!("{need} replicates are required, {} configured", self.replicates),
                )?;
                check(!matches!(self.mode, SolverMode::Picard { .. }), Rule::Config, "use the picard subcommand for Picard mode")?;
            }
            Purpose::Picard => {
                check(matches!(self.mode, SolverMode::Picard { .. }), Rule::Config, "picard requires mode kind \"picard\"")?;
            }
            Purpose::Oracle => {
                check(self.dim <= 2, Rule::DenseSize, "the dense oracle supports d = 1 and d = 2")?;
                let cap = DENSE_MAX_N[self.dim - 1];
                check(
                    self.grid.n <= cap,
                    Rule::DenseSize,
                    format!("the dense oracle needs N <= {cap} in d = {}", self.dim),
                )?;
                check(self.mode == SolverMode::Direct, Rule::Config, "oracle compare runs the direct scheme")?;
                swe_core::oracle::check_cfl(&cfg.grid, self.dt)?;
            }
            Purpose::Simulate => {}
            Purpose::Kernels | Purpose::Noise => unreachable!(),
        }
        Ok(())
    }
}

fn check(ok: bool, rule: Rule, message: impl Into<String>) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::new(rule, message))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample() -> ExperimentConfig {
        serde_json::from_str(
            r#"{
                "dim": 1, "beta": 0.5,
                "sigma": {"kind": "constant", "value": 1.0},
                "grid": {"n": 128, "half_period": 8.0},
                "dt": 0.03125, "horizon": 1.0,
                "record_times": [0.0, 0.5, 1.0],
                "radii": [1.0, 2.0],
                "replicates": 200
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn fingerprint_ignores_formatting_and_key_order() {
        let a = sample();
        let b: ExperimentConfig = serde_json::from_str(
            r#"{"radii":[1.0,2.0],"replicates":200,"beta":0.5,"dim":1,
                "grid":{"half_period":8.0,"n":128},"sigma":{"value":1.0,"kind":"constant"},
                "dt":0.03125,"horizon":1.0,"record_times":[0.0,0.5,1.0]}"#,
        )
        .unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        let mut c = a.clone();
        c.seed = 9;
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = serde_json::from_str::<ExperimentConfig>(r#"{"dim": 1, "betta": 0.5}"#);
        assert!(err.is_err());
    }

    #[test]
    fn wraparound_violation_names_the_rule() {
        let mut cfg = sample();
        cfg.radii = vec![6.0];
        let err = cfg.validate(Purpose::Clt).unwrap_err();
        assert_eq!(err.rule(), Rule::Wraparound);
        assert!(err.to_string().contains("wraparound"));
    }

    #[test]
    fn clt_needs_nonzero_sigma_at_one() {
        let mut cfg = sample();
        cfg.sigma = Sigma::Affine { a: 1.0, b: -1.0 };
        assert_eq!(cfg.validate(Purpose::Clt).unwrap_err().rule(), Rule::SigmaAtOne);
        assert!(cfg.validate(Purpose::Simulate).is_ok());
    }

    #[test]
    fn replicate_floors_depend_on_the_subcommand() {
        let cfg = sample();
        assert!(cfg.validate(Purpose::Clt).is_ok());
        assert_eq!(cfg.validate(Purpose::Fclt).unwrap_err().rule(), Rule::Replicates);
    }

    #[test]
    fn dense_oracle_caps_the_grid() {
        let mut cfg = sample();
        assert_eq!(cfg.validate(Purpose::Oracle).unwrap_err().rule(), Rule::DenseSize);
        cfg.grid = GridSpec { n: 32, half_period: 4.0 };
        cfg.radii = vec![0.875];
        cfg.dt = 1.0 / 128.0;
        assert!(cfg.validate(Purpose::Oracle).is_ok());
    }
}
