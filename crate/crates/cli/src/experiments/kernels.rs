use serde_json::json;
use swe_core::kernels::{multiplier_bound_suite, tau_beta};
use swe_core::oracle::closed_form_tau;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{Outcome, Table, Verdict};
use crate::row;

const TAU_REL: f64 = 1e-6;
const TAU_REL_3D: f64 = 1e-5;
/// β values checked against the closed form in d = 1, plus the configured one.
const TAU_BETAS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

pub fn kernels_check(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let report = multiplier_bound_suite(cfg.horizon, cfg.bound_samples, cfg.seed);
    let mut bounds = Table::new("bounds", &["inequality", "worst_margin", "pass"]);
    for (name, margin) in [
        ("sup", report.sup_bound),
        ("decay", report.decay_bound),
        ("lipschitz", report.lipschitz_bound),
        ("half_gap", report.half_gap_bound),
        ("bessel_domination", report.bessel_domination),
    ] {
        bounds.push(row![name, margin, margin >= 0.0]);
    }

    let mut cases: Vec<(usize, f64, f64)> = TAU_BETAS.iter().map(|&b| (1, b, TAU_REL)).collect();
    cases.push((3, 1.0, TAU_REL_3D));
    if matches!(cfg.dim, 1 | 3) && !cases.iter().any(|c| c.0 == cfg.dim && c.1 == cfg.beta) {
        cases.push((cfg.dim, cfg.beta, if cfg.dim == 1 { TAU_REL } else { TAU_REL_3D }));
    }
    let mut tau = Table::new("tau", &["d", "beta", "tau", "closed_form", "rel_error", "pass"]);
    let mut tau_ok = true;
    for (d, beta, tol) in cases {
        let value = tau_beta(d, beta)?;
        let exact = closed_form_tau(d, beta)?;
        let rel = ((value - exact) / exact).abs();
        tau_ok &= rel <= tol;
        tau.push(row![d, beta, value, exact, rel, rel <= tol]);
    }
    Ok(Outcome {
        verdicts: vec![
            Verdict::new(
                "multiplier_bounds",
                report.pass,
                format!("worst margin {:e} over {} draws", report.worst_margin(), report.samples),
            ),
            Verdict::new("tau_closed_form", tau_ok, "tau_beta against closed forms in d = 1 and d = 3"),
        ],
        tables: vec![bounds, tau],
        plot_tables: vec![],
        details: json!({ "bounds": report, "configured_tau": tau_beta(cfg.dim, cfg.beta)? }),
    })
}
