use rayon::prelude::*;
use serde_json::json;
use swe_core::oracle::{exact_variance_quadrature, DenseSimulator};
use swe_core::solver::{AverageStencil, AverageWeight};
use swe_core::stats::moments::{covariance_jackknife, mean, mean_se};

use super::{direct_paths, last};
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{Outcome, Table, Verdict};
use crate::row;

/// Two-sided 95% normal quantile, for "within a CI" checks.
const CI95: f64 = 1.959_963_984_540_054;

fn moment(x: &[f64], variance: bool) -> (f64, f64) {
    if variance {
        covariance_jackknife(x, x)
    } else {
        (mean(x), mean_se(x))
    }
}

/// Spectral and dense solvers on the same small torus: moments of `u(T, 0)` and of the
/// average at the focus radius, plus the exact linear-case variance in d = 1.
pub fn oracle_compare(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let weights = cfg.weights()?;
    let j = last(cfg);
    let r = cfg.focus();
    let radius = cfg.radii[r];
    let horizon = cfg.record_times[j];

    let spectral = direct_paths(cfg, &weights)?;
    let s_center: Vec<f64> = spectral.iter().map(|p| p.center_u[j]).collect();
    let s_avg: Vec<f64> = spectral.iter().map(|p| p.averages[r].values[j]).collect();

    let dense = DenseSimulator::new(&weights, cfg.dt)?;
    let record = cfg.solver_config()?.record_steps();
    let stencil = AverageStencil::<f64>::new(&weights.grid, radius, AverageWeight::Indicator);
    let (d_center, d_avg): (Vec<f64>, Vec<f64>) = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|rep| {
            let path = dense.sample_path(cfg.sigma, &record, cfg.seed, rep);
            let field = &path.fields[j];
            (field[0], stencil.apply(field))
        })
        .unzip();

    let exact = match (cfg.sigma.constant_value(), cfg.dim) {
        (Some(c), 1) => Some(c * c * exact_variance_quadrature(&weights.riesz, radius, horizon)?),
        _ => None,
    };
    let mut table = Table::new(
        "oracle",
        &["statistic", "spectral", "spectral_se", "dense", "dense_se", "exact", "z"],
    );
    let mut verdicts = Vec::new();
    let mut stats = Vec::new();
    for (name, s, d, variance) in [
        ("center_mean", &s_center, &d_center, false),
        ("center_variance", &s_center, &d_center, true),
        ("average_variance", &s_avg, &d_avg, true),
    ] {
        let (sv, sse) = moment(s, variance);
        let (dv, dse) = moment(d, variance);
        let z = (sv - dv) / sse.hypot(dse);
        let ex = if name == "average_variance" { exact } else { None };
        table.push(row![name, sv, sse, dv, dse, ex.unwrap_or(f64::NAN), z]);
        stats.push(json!({"statistic": name, "spectral": sv, "spectral_se": sse, "dense": dv, "dense_se": dse, "z": z}));
        if name != "average_variance" {
            verdicts.push(Verdict::new(
                format!("spectral_dense_{name}"),
                z.abs() <= cfg.tolerances.oracle_se,
                format!("spectral {sv:.6} vs dense {dv:.6}: z = {z:.3}"),
            ));
        }
        if let Some(e) = ex {
            let gap = (dv - e).abs();
            verdicts.push(Verdict::new(
                "dense_exact_average_variance",
                gap <= cfg.tolerances.dense_rel * e + CI95 * dse,
                format!(
                    "dense Var F_R = {dv:.5} vs exact {e:.5} ({:.2}%, SE {dse:.5})",
                    100.0 * (dv - e) / e
                ),
            ));
        }
    }
    Ok(Outcome {
        verdicts,
        tables: vec![table],
        plot_tables: vec![],
        details: json!({ "radius": radius, "t": horizon, "statistics": stats, "clipping": dense.clipping }),
    })
}
