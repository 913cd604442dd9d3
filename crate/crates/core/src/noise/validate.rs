use serde::{Deserialize, Serialize};

use super::weights::SpectralWeights;
use crate::error::{Error, Result};
use crate::fft::FftNd;
use crate::rng::{stream, Domain};

pub const MIN_DRAWS: usize = 1000;
pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagCheck {
    /// Displacement in cells.
    pub shift: Vec<i64>,
    /// Euclidean length of the displacement.
    pub distance: f64,
    pub empirical: f64,
    pub analytic: f64,
    pub se: f64,
    pub z: f64,
    /// Difference between estimates from two disjoint anchor halves, in SEs.
    pub stationarity_z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub dt: f64,
    pub draws: usize,
    pub lags: Vec<LagCheck>,
    pub max_imag_residue: f64,
    /// All `|z| <= 4`.
    pub pass: bool,
    /// All `|stationarity_z| <= 4`.
    pub stationary: bool,
}

/// Empirical covariance of sampled increments at the given cell shifts versus the spectral target.
pub fn covariance_validation(
    weights: &SpectralWeights,
    dt: f64,
    draws: usize,
    shifts: &[Vec<i64>],
    seed: u64,
) -> Result<CovarianceReport> {
    covariance_validation_against(weights, weights, dt, draws, shifts, seed)
}

/// As [`covariance_validation`], sampling from `sampler` but testing against `target`'s covariance.
pub fn covariance_validation_against(
    sampler: &SpectralWeights,
    target: &SpectralWeights,
    dt: f64,
    draws: usize,
    shifts: &[Vec<i64>],
    seed: u64,
) -> Result<CovarianceReport> {
    if draws < MIN_DRAWS {
        return Err(Error::InsufficientReplicates {
            have: draws,
            need: MIN_DRAWS,
            what: "covariance validation",
        });
    }
    let grid = sampler.grid;
    if shifts.iter().any(|s| s.len() != grid.dim) {
        return Err(crate::error::invalid("shifts", "every shift needs one entry per axis"));
    }
    let fft = FftNd::<f64>::new(grid.dim, grid.n);
    let cells = grid.len();
    let half = cells / 2;
    let targets: Vec<usize> = (0..cells).collect();
    let partners: Vec<Vec<usize>> = shifts
        .iter()
        .map(|s| targets.iter().map(|&i| grid.shifted(i, s)).collect())
        .collect();

    let mut full = vec![Vec::with_capacity(draws); shifts.len()];
    let mut split = vec![Vec::with_capacity(draws); shifts.len()];
    let mut max_imag: f64 = 0.0;
    for draw in 0..draws {
        let inc = sampler.sample_increment(&fft, dt, &mut stream(seed, Domain::Noise, draw as u64, 0));
        max_imag = max_imag.max(inc.imag_residue);
        let v = &inc.values;
        for (lag, moved) in partners.iter().enumerate() {
            let (mut a, mut b) = (0.0, 0.0);
            for (i, &j) in moved.iter().enumerate() {
                let prod = v[i] * v[j];
                if i < half {
                    a += prod;
                } else {
                    b += prod;
                }
            }
            full[lag].push((a + b) / cells as f64);
            split[lag].push(a / half as f64 - b / (cells - half) as f64);
        }
    }

    let dx = grid.dx();
    let lags: Vec<LagCheck> = shifts
        .iter()
        .enumerate()
        .map(|(lag, shift)| {
            let (empirical, se) = mean_se(&full[lag]);
            let (diff, diff_se) = mean_se(&split[lag]);
            let analytic = target.covariance(dt, shift);
            LagCheck {
                shift: shift.clone(),
                distance: dx * (shift.iter().map(|s| (s * s) as f64).sum::<f64>()).sqrt(),
                empirical,
                analytic,
                se,
                z: (empirical - analytic) / se,
                stationarity_z: diff / diff_se,
            }
        })
        .collect();
    Ok(CovarianceReport {
        dt,
        draws,
        pass: lags.iter().all(|l| l.z.abs() <= Z_LIMIT),
        stationary: lags.iter().all(|l| l.stationarity_z.abs() <= Z_LIMIT),
        lags,
        max_imag_residue: max_imag,
    })
}

fn mean_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
