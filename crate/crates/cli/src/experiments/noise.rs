use serde_json::json;
use swe_core::noise::{covariance_validation, SpectralWeights, TorusGrid};

use super::fmt_shift;
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{Outcome, Table, Verdict};
use crate::row;

/// Unit shifts along each axis, a shift of two along the first, and the unit diagonal.
fn default_shifts(dim: usize) -> Vec<Vec<i64>> {
    let mut shifts: Vec<Vec<i64>> = (0..dim)
        .map(|a| (0..dim).map(|b| i64::from(a == b)).collect())
        .collect();
    let mut two = vec![0; dim];
    two[0] = 2;
    shifts.push(two);
    if dim > 1 {
        shifts.push(vec![1; dim]);
    }
    shifts
}

pub fn noise_validate(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let weights = cfg.weights()?;
    let shifts = if cfg.noise.shifts.is_empty() {
        default_shifts(cfg.dim)
    } else {
        cfg.noise.shifts.clone()
    };
    let report = covariance_validation(&weights, cfg.dt, cfg.noise.draws, &shifts, cfg.seed)?;
    let tol = cfg.tolerances.noise_z;

    let mut lags = Table::new("noise", &["lag", "empirical", "analytic", "z"]);
    // The flat-space correlation |h|^{-β} per unit time, which the torus only approximates.
    let mut continuum = Table::new("noise_continuum", &["lag", "distance", "empirical", "continuum", "z"]);
    let mut worst: f64 = 0.0;
    for lag in &report.lags {
        lags.push(row![fmt_shift(&lag.shift), lag.empirical, lag.analytic, lag.z]);
        worst = worst.max(lag.z.abs()).max(lag.stationarity_z.abs());
        let target = cfg.dt * weights.riesz.correlation(lag.distance);
        continuum.push(row![
            fmt_shift(&lag.shift),
            lag.distance,
            lag.empirical,
            target,
            (lag.empirical - target) / lag.se
        ]);
    }
    let mut verdicts = vec![Verdict::new(
        "covariance",
        worst <= tol,
        format!("max |z| = {worst:.3} over {} lags and the stationarity checks", report.lags.len()),
    )];
    let mut tables = vec![lags, continuum];

    if cfg.noise.periodization {
        let grid = cfg.torus()?;
        let doubled = SpectralWeights::build(
            TorusGrid::new(grid.dim, 2 * grid.n, 2.0 * grid.half_period)?,
            weights.riesz,
            weights.zero_mode,
        )?;
        let mut table = Table::new("periodization", &["lag", "analytic", "analytic_doubled", "rel_change"]);
        let mut max_rel: f64 = 0.0;
        for shift in &shifts {
            let a = weights.covariance(cfg.dt, shift);
            let b = doubled.covariance(cfg.dt, shift);
            let rel = ((b - a) / a).abs();
            max_rel = max_rel.max(rel);
            table.push(row![fmt_shift(shift), a, b, rel]);
        }
        verdicts.push(Verdict::new(
            "periodization",
            max_rel < cfg.tolerances.periodization_rel,
            format!("doubling L changes the lag covariances by at most {:.3}%", 100.0 * max_rel),
        ));
        tables.push(table);
    }
    Ok(Outcome {
        verdicts,
        tables,
        plot_tables: vec![],
        details: json!({ "report": report }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_shifts_cover_axes_and_diagonal() {
        assert_eq!(default_shifts(1), vec![vec![1], vec![2]]);
        assert_eq!(default_shifts(2), vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1]]);
    }
}
