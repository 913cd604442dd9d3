use serde::{Deserialize, Serialize};

use super::ensemble::{Ensemble, EnsembleMeta, PicardEnsemble};
use super::moments::{mean, mean_se, variance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardRow {
    pub n: u32,
    pub t: f64,
    /// `‖u_n(t,0) - U(t,0)‖₂`.
    pub gap_center: f64,
    pub gap_center_se: f64,
    /// `‖F_{n,R}(t) - F_R(t)‖₂ / σ̂_R(t)`.
    pub gap_average: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardSummary {
    pub n: u32,
    /// Supremum over record times of the center gap.
    pub gap_center: f64,
    /// SE at the maximizing time.
    pub gap_center_se: f64,
    pub t_at_sup: f64,
    pub gap_average: f64,
}

impl PicardEnsemble {
    /// The direct solutions of the coupled runs as an ordinary ensemble.
    pub fn direct_ensemble(&self) -> Result<Ensemble> {
        let paths: Vec<_> = self.runs.iter().map(|r| r.direct.clone()).collect();
        Ensemble::from_paths(self.meta.clone(), self.times.clone(), &paths)
    }
}

/// `sqrt(mean(d²))` and its delta-method SE.
fn root_mean_square(d: &[f64]) -> (f64, f64) {
    let sq: Vec<f64> = d.iter().map(|v| v * v).collect();
    let m = mean(&sq);
    let root = m.sqrt();
    let se = if root > 0.0 { mean_se(&sq) / (2.0 * root) } else { 0.0 };
    (root, se)
}

/// L² gaps between each Picard level and the direct solution on the same noise paths.
/// `r` selects the averaging radius for the normalized average gap.
pub fn picard_gap(direct: &Ensemble, picard: &PicardEnsemble, r: usize) -> Result<(Vec<PicardRow>, Vec<PicardSummary>)> {
    check_coupling(&direct.meta, &picard.meta)?;
    if direct.replicates() != picard.runs.len() {
        return Err(Error::SeedMismatch(format!(
            "{} direct replicates versus {} Picard replicates",
            direct.replicates(),
            picard.runs.len()
        )));
    }
    for (rep, run) in picard.runs.iter().enumerate() {
        for (j, u) in run.direct.center_u.iter().enumerate() {
            if direct.center_u[j][rep] != *u {
                return Err(Error::SeedMismatch(format!("replicate {rep} follows a different noise path")));
            }
        }
    }
    let levels = picard.runs.first().map_or(0, |p| p.levels.len());
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for n in 0..levels {
        let mut best = PicardSummary {
            n: n as u32,
            gap_center: 0.0,
            gap_center_se: 0.0,
            t_at_sup: 0.0,
            gap_average: 0.0,
        };
        for (j, &t) in direct.times.iter().enumerate() {
            let dc: Vec<f64> = picard.runs.iter().enumerate().map(|(rep, p)| p.levels[n].center[j] - direct.center_u[j][rep]).collect();
            let (gap_center, gap_center_se) = root_mean_square(&dc);
            let da: Vec<f64> = picard
                .runs
                .iter()
                .enumerate()
                .map(|(rep, p)| p.levels[n].averages[r][j] - direct.values[r][j][rep])
                .collect();
            let sd = variance(&direct.values[r][j]).sqrt();
            let gap_average = if sd > 0.0 { root_mean_square(&da).0 / sd } else { 0.0 };
            rows.push(PicardRow {
                n: n as u32,
                t,
                gap_center,
                gap_center_se,
                gap_average,
            });
            if gap_center > best.gap_center {
                best.gap_center = gap_center;
                best.gap_center_se = gap_center_se;
                best.t_at_sup = t;
            }
            best.gap_average = best.gap_average.max(gap_average);
        }
        summary.push(best);
    }
    Ok((rows, summary))
}

fn check_coupling(a: &EnsembleMeta, b: &EnsembleMeta) -> Result<()> {
    if a.seed != b.seed {
        return Err(Error::SeedMismatch(format!("seeds {} and {} differ", a.seed, b.seed)));
    }
    Ok(())
}
