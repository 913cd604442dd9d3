use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swe_cli::config::{ExperimentConfig, Purpose};
use swe_cli::error::{CliError, Rule};

#[derive(Parser)]
#[command(name = "swe", version, about = "Monte Carlo experiments for the stochastic wave equation")]
struct Cli {
    /// JSON experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Also write tidy long-format CSVs for plotting.
    #[arg(long, global = true)]
    emit_plot_data: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplier bound suite and τ_β closed forms.
    Kernels {
        #[command(subcommand)]
        action: KernelsAction,
    },
    Noise {
        #[command(subcommand)]
        action: NoiseAction,
    },
    /// Run an ensemble and dump raw averages.
    Simulate,
    /// Variance scaling and distances to normality.
    Clt,
    /// Covariance surface and tightness.
    Fclt,
    /// Coupled Picard iterates.
    Picard,
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Subcommand)]
enum KernelsAction {
    Check,
}

#[derive(Subcommand)]
enum NoiseAction {
    /// Empirical against analytic covariance of the sampled increments.
    Validate,
}

#[derive(Subcommand)]
enum OracleAction {
    /// Spectral solver against the dense covariance simulator.
    Compare,
}

const KERNELS_DEFAULT: &str = r#"{
    "dim": 1, "beta": 0.5,
    "sigma": {"kind": "constant", "value": 1.0},
    "grid": {"n": 64, "half_period": 8.0},
    "dt": 0.0625, "horizon": 2.0,
    "record_times": [0.0, 2.0], "radii": [1.0],
    "replicates": 1
}"#;

fn load(cli: &Cli, purpose: Purpose) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&cli.config, purpose) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Purpose::Kernels) => serde_json::from_str(KERNELS_DEFAULT).expect("built-in config parses"),
        (None, _) => return Err(CliError::new(Rule::Config, "--config is required")),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (purpose, name) = match cli.command {
        Command::Kernels { .. } => (Purpose::Kernels, "kernels check"),
        Command::Noise { .. } => (Purpose::Noise, "noise validate"),
        Command::Simulate => (Purpose::Simulate, "simulate"),
        Command::Clt => (Purpose::Clt, "clt"),
        Command::Fclt => (Purpose::Fclt, "fclt"),
        Command::Picard => (Purpose::Picard, "picard"),
        Command::Oracle { .. } => (Purpose::Oracle, "oracle compare"),
    };
    let result = load(&cli, purpose).and_then(|cfg| swe_cli::execute(purpose, name, &cfg, cli.threads, &cli.out, cli.emit_plot_data));
    match result {
        Ok((outcome, _)) => {
            for v in &outcome.verdicts {
                println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
            }
            if outcome.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let failure = serde_json::json!({ "pass": false, "failures": [err] });
            println!("{failure}");
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
