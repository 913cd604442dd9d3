use serde_json::json;
use swe_core::oracle::exact_variance_quadrature;
use swe_core::stats::{covariance_surface, Ensemble, distance_estimate, tightness_modulus, variance_scaling, DistanceEstimate, VarianceRow};

use super::{ensemble, last, limit_functional, sci};
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{Outcome, Table, Verdict};
use crate::row;

/// Raw ensemble dump: averages and the center trace per replicate.
pub fn simulate(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (_, ens) = ensemble(cfg)?;
    let mut averages = Table::new("averages", &["replicate", "R", "t", "value"]);
    let mut center = Table::new("center", &["replicate", "t", "u", "sigma"]);
    let mut finite = true;
    for rep in 0..ens.replicates() {
        for (r, &radius) in ens.radii.iter().enumerate() {
            for (j, &t) in ens.times.iter().enumerate() {
                let v = ens.values[r][j][rep];
                finite &= v.is_finite();
                averages.push(row![rep, radius, t, v]);
            }
        }
        for (j, &t) in ens.times.iter().enumerate() {
            finite &= ens.center_u[j][rep].is_finite();
            center.push(row![rep, t, ens.center_u[j][rep], ens.center_sigma[j][rep]]);
        }
    }
    Ok(Outcome {
        verdicts: vec![Verdict::new("finite", finite, "every recorded value is finite")],
        tables: vec![averages, center],
        plot_tables: vec![],
        details: json!({ "replicates": ens.replicates() }),
    })
}

/// Gap to the limit at each radius may grow by at most one combined SE from one radius
/// to the next.
fn gap_trend(rows: &[&VarianceRow]) -> (bool, Vec<f64>) {
    let gaps: Vec<f64> = rows.iter().map(|r| (r.normalized - r.target).abs()).collect();
    let ok = rows
        .windows(2)
        .zip(gaps.windows(2))
        .all(|(r, g)| g[1] <= g[0] + r[0].se.hypot(r[1].se));
    (ok, gaps)
}

pub fn clt(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    clt_report(cfg, &ensemble(cfg)?.1)
}

/// The `clt` analysis of an existing ensemble sampled under `cfg`.
pub fn clt_report(cfg: &ExperimentConfig, ens: &Ensemble) -> Result<Outcome, CliError> {
    let lf = limit_functional(cfg, ens)?;
    let tol = cfg.tolerances;
    let rows = variance_scaling(ens, &lf)?;
    let mut variance = Table::new("variance", &["R", "t", "var", "normalized", "target", "se", "z"]);
    for r in &rows {
        variance.push(row![r.radius, r.t, r.var, r.normalized, r.target, r.se, r.z]);
    }
    let t_last = cfg.record_times[last(cfg)];
    let at_horizon: Vec<&VarianceRow> = rows.iter().filter(|r| r.t == t_last).collect();
    let (trend_ok, gaps) = gap_trend(&at_horizon);
    let mut verdicts = vec![Verdict::new(
        "variance_trend",
        trend_ok,
        format!("|normalized - target| at t = {t_last} across R: {gaps:.4?}"),
    )];
    let mut tables = vec![variance];

    // Linear case in d = 1: compare with the exact second moment at each finite R.
    let mut anchor_details = serde_json::Value::Null;
    if let (Some(c), 1) = (cfg.sigma.constant_value(), cfg.dim) {
        let mut anchor = Table::new("anchor", &["R", "t", "normalized", "exact", "se", "z", "pass"]);
        let mut ok = true;
        let mut exact_gaps = Vec::new();
        for r in rows.iter().filter(|r| r.t > 0.0) {
            let exact = c * c * exact_variance_quadrature(&lf.riesz, r.radius, r.t)? * r.radius.powf(lf.riesz.beta - 2.0);
            let pass = (r.normalized - exact).abs() <= tol.variance_rel * exact + tol.variance_se * r.se;
            ok &= pass;
            if r.t == t_last {
                exact_gaps.push((exact - r.target).abs());
            }
            anchor.push(row![r.radius, r.t, r.normalized, exact, r.se, (r.normalized - exact) / r.se, pass]);
        }
        let decreasing = exact_gaps.windows(2).all(|w| w[1] < w[0]);
        verdicts.push(Verdict::new(
            "exact_anchor",
            ok,
            format!(
                "normalized variance within {}% + {} SE of the exact quadrature",
                100.0 * tol.variance_rel,
                tol.variance_se
            ),
        ));
        verdicts.push(Verdict::new(
            "exact_gap_decreasing",
            decreasing,
            format!("exact gap to the limit at t = {t_last}: {}", sci(&exact_gaps)),
        ));
        anchor_details = json!({ "exact_gaps": exact_gaps });
        tables.push(anchor);
    }

    let mut distance = Table::new("distance", &["R", "t", "wasserstein", "w_ci_lo", "w_ci_hi", "kolmogorov"]);
    let mut estimates: Vec<(f64, f64, DistanceEstimate)> = Vec::new();
    let nt = ens.times.len();
    for (r, &radius) in ens.radii.iter().enumerate() {
        for (j, &t) in ens.times.iter().enumerate().filter(|(_, t)| **t > 0.0) {
            let cell = (r * nt + j) as u64;
            let est = distance_estimate(&ens.values[r][j], cfg.bootstrap.resamples, cfg.bootstrap.level, cfg.seed, cell)?;
            distance.push(row![radius, t, est.wasserstein, est.w_ci.0, est.w_ci.1, est.kolmogorov]);
            estimates.push((radius, t, est));
        }
    }
    let kol_ok = estimates.iter().all(|(_, _, e)| e.kolmogorov_bound_holds(tol.kolmogorov_se));
    verdicts.push(Verdict::new(
        "kolmogorov_bound",
        kol_ok,
        format!("d_Kol <= 2 sqrt(d_W) + {} combined SE on every row", tol.kolmogorov_se),
    ));
    let horizon: Vec<&DistanceEstimate> = estimates.iter().filter(|e| e.1 == t_last).map(|e| &e.2).collect();
    let w_trend = horizon.windows(2).all(|w| w[1].wasserstein <= w[0].w_ci.1);
    let w: Vec<f64> = horizon.iter().map(|e| e.wasserstein).collect();
    verdicts.push(Verdict::new(
        "wasserstein_trend",
        w_trend,
        format!("d_W at t = {t_last} across R: {w:.4?}; each must stay below the previous upper CI"),
    ));
    let w_final = w.last().copied().unwrap_or(f64::NAN);
    verdicts.push(Verdict::new(
        "wasserstein_threshold",
        w_final <= tol.wasserstein_max,
        format!("d_W = {w_final:.4} at the largest R (limit {})", tol.wasserstein_max),
    ));
    tables.push(distance);

    let mut plot = Table::new("plot_clt", &["series", "R", "t", "value", "lo", "hi"]);
    for r in &rows {
        plot.push(row!["normalized_variance", r.radius, r.t, r.normalized, r.normalized - r.se, r.normalized + r.se]);
    }
    for (radius, t, e) in &estimates {
        plot.push(row!["wasserstein", *radius, *t, e.wasserstein, e.w_ci.0, e.w_ci.1]);
        plot.push(row!["kolmogorov", *radius, *t, e.kolmogorov, e.k_ci.0, e.k_ci.1]);
    }
    Ok(Outcome {
        verdicts,
        tables,
        plot_tables: vec![plot],
        details: json!({
            "replicates": ens.replicates(),
            "tau": lf.tau,
            "variance": rows,
            "distances": estimates.iter().map(|(r, t, e)| json!({"R": r, "t": t, "estimate": e})).collect::<Vec<_>>(),
            "anchor": anchor_details,
        }),
    })
}

pub fn fclt(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    fclt_report(cfg, &ensemble(cfg)?.1)
}

/// The `fclt` analysis of an existing ensemble sampled under `cfg`.
pub fn fclt_report(cfg: &ExperimentConfig, ens: &Ensemble) -> Result<Outcome, CliError> {
    let lf = limit_functional(cfg, ens)?;
    let tol = cfg.tolerances;
    let surface = covariance_surface(ens, &lf, cfg.focus())?;
    let mut covariance = Table::new("covariance", &["s", "t", "R", "empirical", "target", "z"]);
    let mut cov_ok = true;
    for c in &surface.cells {
        cov_ok &= (c.empirical - c.target).abs() <= tol.covariance_rel * c.target.abs() + tol.covariance_se * c.se;
        covariance.push(row![c.s, c.t, c.radius, c.empirical, c.target, c.z]);
    }
    let report = tightness_modulus(ens, cfg.dim, cfg.beta)?;
    let mut tightness = Table::new("tightness", &["s", "t", "R", "increment_msq", "model", "ratio"]);
    for r in &report.rows {
        tightness.push(row![r.s, r.t, r.radius, r.increment_msq, r.model, r.ratio]);
    }
    let mut doubling = Table::new("doubling", &["s", "t", "R_small", "R_large", "ratio", "expected", "se", "z"]);
    for d in &report.doubling {
        doubling.push(row![d.s, d.t, d.radius_small, d.radius_large, d.ratio, d.expected, d.se, d.z]);
    }
    let max_z = report.doubling.iter().map(|d| d.z.abs()).fold(0.0, f64::max);
    let mut plot = Table::new("plot_fclt", &["series", "s", "t", "R", "value", "reference"]);
    for c in &surface.cells {
        plot.push(row!["covariance", c.s, c.t, c.radius, c.empirical, c.target]);
    }
    for r in &report.rows {
        plot.push(row!["increment", r.s, r.t, r.radius, r.increment_msq, r.model]);
    }
    Ok(Outcome {
        verdicts: vec![
            Verdict::new(
                "covariance_surface",
                cov_ok,
                format!(
                    "every cell within {}% + {} SE of the limit (max relative gap {:.4})",
                    100.0 * tol.covariance_rel,
                    tol.covariance_se,
                    surface.max_rel_gap
                ),
            ),
            Verdict::new(
                "tightness",
                report.pass,
                format!("increment/model ratios in [{:.3}, {:.3}], C = {:.4e}", report.min_ratio, report.max_ratio, report.c),
            ),
            Verdict::new(
                "tightness_doubling",
                max_z <= tol.doubling_se,
                format!("radius-doubling ratios against (R'/R)^(2d-beta): max |z| = {max_z:.3}"),
            ),
        ],
        tables: vec![covariance, tightness, doubling],
        plot_tables: vec![plot],
        details: json!({ "surface": surface, "tightness": report }),
    })
}
