use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::solver::{PathObservation, PicardObservation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleMeta {
    /// Hash of the canonical run configuration.
    pub fingerprint: String,
    pub seed: u64,
}

/// Replicate × (R, t) table of spatial averages plus the center trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub meta: EnsembleMeta,
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
    /// `[radius][time][replicate]`.
    pub values: Vec<Vec<Vec<f64>>>,
    /// ψ_R-weighted averages, same layout, when recorded.
    pub smoothed: Option<Vec<Vec<Vec<f64>>>>,
    /// `[time][replicate]` of `U(t_j, 0)`.
    pub center_u: Vec<Vec<f64>>,
    /// `[time][replicate]` of `σ(U(t_j, 0))`.
    pub center_sigma: Vec<Vec<f64>>,
}

impl Ensemble {
    pub fn from_paths(meta: EnsembleMeta, times: Vec<f64>, paths: &[PathObservation]) -> Result<Self> {
        let first = paths.first().ok_or(Error::InsufficientReplicates {
            have: 0,
            need: 1,
            what: "an ensemble",
        })?;
        let radii: Vec<f64> = first.averages.iter().map(|a| a.radius).collect();
        let nt = times.len();
        for p in paths {
            if p.center_u.len() != nt || p.averages.len() != radii.len() || p.averages.iter().any(|a| a.values.len() != nt) {
                return Err(invalid("paths", "replicates disagree on the record grid"));
            }
        }
        let values = (0..radii.len())
            .map(|r| (0..nt).map(|j| paths.iter().map(|p| p.averages[r].values[j]).collect()).collect())
            .collect();
        let smoothed = first.averages.iter().all(|a| a.smoothed.is_some()).then(|| {
            (0..radii.len())
                .map(|r| {
                    (0..nt)
                        .map(|j| paths.iter().map(|p| p.averages[r].smoothed.as_ref().map_or(f64::NAN, |s| s[j])).collect())
                        .collect()
                })
                .collect()
        });
        let column = |f: &dyn Fn(&PathObservation) -> &Vec<f64>| -> Vec<Vec<f64>> {
            (0..nt).map(|j| paths.iter().map(|p| f(p)[j]).collect()).collect()
        };
        Ok(Self {
            meta,
            times,
            radii,
            values,
            smoothed,
            center_u: column(&|p| &p.center_u),
            center_sigma: column(&|p| &p.center_sigma),
        })
    }

    pub fn replicates(&self) -> usize {
        self.center_u.first().map_or(0, |c| c.len())
    }

    pub(crate) fn require(&self, need: usize, what: &'static str) -> Result<()> {
        let have = self.replicates();
        if have < need {
            return Err(Error::InsufficientReplicates { have, need, what });
        }
        Ok(())
    }
}

/// Picard runs, all replicates sharing one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardEnsemble {
    pub meta: EnsembleMeta,
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
    pub runs: Vec<PicardObservation>,
}
