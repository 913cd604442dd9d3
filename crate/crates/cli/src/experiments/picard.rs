use serde_json::json;
use swe_core::kernels::MollifierFamily;
use swe_core::oracle::constant_sigma_mollifier_gap;
use swe_core::stats::{picard_gap, PicardEnsemble, PicardSummary};

use super::{last, meta, picard_paths, sci};
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{Outcome, Table, Verdict};
use crate::row;

/// Center gap may grow by at most one combined SE from level `n` to `n + 1`, for `n >= 1`.
fn monotone(summary: &[PicardSummary]) -> bool {
    summary
        .iter()
        .skip(1)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1].gap_center <= w[0].gap_center + w[0].gap_center_se.hypot(w[1].gap_center_se))
}

pub fn picard(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let weights = cfg.weights()?;
    let runs = picard_paths(cfg, &weights)?;
    let pe = PicardEnsemble {
        meta: meta(cfg),
        times: cfg.record_times.clone(),
        radii: cfg.radii.clone(),
        runs,
    };
    let direct = pe.direct_ensemble()?;
    let (rows, summary) = picard_gap(&direct, &pe, cfg.focus())?;
    let mut table = Table::new("picard", &["n", "t", "gap_center", "gap_average"]);
    for r in &rows {
        table.push(row![r.n, r.t, r.gap_center, r.gap_average]);
    }
    let mut sup = Table::new("picard_summary", &["n", "gap_center", "gap_center_se", "t_at_sup", "gap_average"]);
    for s in &summary {
        sup.push(row![s.n, s.gap_center, s.gap_center_se, s.t_at_sup, s.gap_average]);
    }
    let gaps: Vec<f64> = summary.iter().map(|s| s.gap_center).collect();
    let mut verdicts = vec![Verdict::new(
        "monotone",
        monotone(&summary),
        format!("sup_t center gaps by level: {}", sci(&gaps)),
    )];

    let mut prediction = serde_json::Value::Null;
    if let Some(c) = cfg.sigma.constant_value() {
        // First iterate of a constant-σ run: the gap is the noise filtered by 1 - FΛ_1.
        let grid = weights.grid;
        let family = MollifierFamily::new(grid.dim)?;
        let dxi = grid.dxi();
        let factors: Vec<f64> = grid.norm2_table().iter().map(|&k2| family.transform(1, (k2 as f64).sqrt() * dxi)).collect();
        let j = last(cfg);
        let steps = (cfg.record_times[j] / cfg.dt).round() as usize;
        let predicted = constant_sigma_mollifier_gap(&weights, c, cfg.dt, steps, &factors).sqrt();
        let observed = rows.iter().find(|r| r.n == 1 && r.t == cfg.record_times[j]).map_or(f64::NAN, |r| r.gap_center);
        let rel = (observed - predicted).abs() / predicted;
        verdicts.push(Verdict::new(
            "first_iterate",
            rel <= cfg.tolerances.picard_rel,
            format!("n = 1 gap {observed:.5e} against the exact {predicted:.5e} ({:.2}%)", 100.0 * rel),
        ));
        prediction = json!({ "observed": observed, "predicted": predicted, "rel_gap": rel });
    }
    let mut plot = Table::new("plot_picard", &["n", "gap_center", "lo", "hi"]);
    for s in &summary {
        plot.push(row![s.n, s.gap_center, s.gap_center - s.gap_center_se, s.gap_center + s.gap_center_se]);
    }
    Ok(Outcome {
        verdicts,
        tables: vec![table, sup],
        plot_tables: vec![plot],
        details: json!({ "summary": summary, "first_iterate": prediction }),
    })
}
