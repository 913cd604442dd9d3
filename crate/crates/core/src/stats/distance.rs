//! Distances from an empirical sample to the standard normal law.

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::moments::{mean, variance};
use crate::error::{Error, Result};
use crate::rng::{stream, Domain};

fn standard_normal() -> Normal {
    Normal::standard()
}

/// `Φ⁻¹((i - ½)/n)` for `i = 1..=n`.
pub fn normal_scores(n: usize) -> Vec<f64> {
    let z = standard_normal();
    (1..=n).map(|i| z.inverse_cdf((i as f64 - 0.5) / n as f64)).collect()
}

fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut x = samples.to_vec();
    // Stable sort: tied values keep replicate order.
    x.sort_by(|a, b| a.total_cmp(b));
    x
}

fn wasserstein_sorted(x: &[f64], scores: &[f64]) -> f64 {
    x.iter().zip(scores).map(|(a, q)| (a - q).abs()).sum::<f64>() / x.len() as f64
}

fn kolmogorov_sorted(x: &[f64]) -> f64 {
    let z = standard_normal();
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let p = z.cdf(v);
            ((i as f64 + 1.0) / n - p).max(p - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

fn check_len(samples: &[f64]) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::InsufficientReplicates {
            have: samples.len(),
            need: 2,
            what: "a distance to normality",
        });
    }
    Ok(())
}

/// Quantile-coupling estimate `(1/n) Σ |x_(i) - Φ⁻¹((i - ½)/n)|` of `W₁(law(x), N(0,1))`.
/// The samples are used as given.
pub fn wasserstein_to_normal(samples: &[f64]) -> Result<f64> {
    check_len(samples)?;
    Ok(wasserstein_sorted(&sorted(samples), &normal_scores(samples.len())))
}

/// `sup_x |F_n(x) - Φ(x)|`, samples used as given.
pub fn kolmogorov_to_normal(samples: &[f64]) -> Result<f64> {
    check_len(samples)?;
    Ok(kolmogorov_sorted(&sorted(samples)))
}

/// `(x - mean)/sd` with the unbiased sample SD; zero spread is rejected.
pub fn standardize(samples: &[f64]) -> Result<Vec<f64>> {
    check_len(samples)?;
    let m = mean(samples);
    let sd = variance(samples).sqrt();
    if !(sd > 0.0) {
        return Err(Error::Degenerate("sample has zero variance".into()));
    }
    Ok(samples.iter().map(|x| (x - m) / sd).collect())
}

/// Distances after standardization, with percentile bootstrap intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub wasserstein: f64,
    pub w_ci: (f64, f64),
    pub w_se: f64,
    pub kolmogorov: f64,
    pub k_ci: (f64, f64),
    pub k_se: f64,
}

impl DistanceEstimate {
    /// `d_Kol <= 2 sqrt(d_W) + k` combined standard errors, with the SE of `2 sqrt(d_W)` from
    /// the delta method.
    pub fn kolmogorov_bound_holds(&self, k: f64) -> bool {
        let root = self.wasserstein.max(0.0).sqrt();
        let bound_se = if root > 0.0 { self.w_se / root } else { f64::INFINITY };
        let combined = (self.k_se * self.k_se + bound_se * bound_se).sqrt();
        self.kolmogorov <= 2.0 * root + k * combined
    }
}

/// Standardized distances with `resamples` bootstrap replicates drawn from `(seed, cell)`.
pub fn distance_estimate(samples: &[f64], resamples: usize, level: f64, seed: u64, cell: u64) -> Result<DistanceEstimate> {
    let z = standardize(samples)?;
    let n = z.len();
    let scores = normal_scores(n);
    let sz = sorted(&z);
    let wasserstein = wasserstein_sorted(&sz, &scores);
    let kolmogorov = kolmogorov_sorted(&sz);
    let mut rng = stream(seed, Domain::Bootstrap, cell, 0);
    let mut w_boot = Vec::with_capacity(resamples);
    let mut k_boot = Vec::with_capacity(resamples);
    let mut draw = vec![0.0; n];
    for _ in 0..resamples {
        for slot in draw.iter_mut() {
            *slot = samples[rng.random_range(0..n)];
        }
        // A resample with no spread carries no shape information; skip it.
        let Ok(b) = standardize(&draw) else { continue };
        let b = sorted(&b);
        w_boot.push(wasserstein_sorted(&b, &scores));
        k_boot.push(kolmogorov_sorted(&b));
    }
    let (w_ci, w_se) = percentile_interval(&mut w_boot, level);
    let (k_ci, k_se) = percentile_interval(&mut k_boot, level);
    Ok(DistanceEstimate {
        wasserstein,
        w_ci,
        w_se,
        kolmogorov,
        k_ci,
        k_se,
    })
}

/// Percentile bootstrap interval and SD of an arbitrary statistic.
pub fn bootstrap_interval(
    samples: &[f64],
    statistic: impl Fn(&[f64]) -> f64,
    resamples: usize,
    level: f64,
    seed: u64,
    cell: u64,
) -> ((f64, f64), f64) {
    let n = samples.len();
    let mut rng = stream(seed, Domain::Bootstrap, cell, 0);
    let mut draw = vec![0.0; n];
    let mut values: Vec<f64> = (0..resamples)
        .map(|_| {
            for slot in draw.iter_mut() {
                *slot = samples[rng.random_range(0..n)];
            }
            statistic(&draw)
        })
        .collect();
    percentile_interval(&mut values, level)
}

/// Percentile interval at coverage `level` and the bootstrap SD.
pub fn percentile_interval(values: &mut [f64], level: f64) -> ((f64, f64), f64) {
    if values.len() < 2 {
        return ((f64::NAN, f64::NAN), f64::NAN);
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let alpha = 0.5 * (1.0 - level);
    let pick = |q: f64| {
        let pos = q * (values.len() - 1) as f64;
        let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
        values[lo] + (values[hi] - values[lo]) * (pos - lo as f64)
    };
    ((pick(alpha), pick(1.0 - alpha)), variance(values).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    fn normals(n: usize, shift: f64, seed: u64) -> Vec<f64> {
        let mut rng = stream(seed, Domain::Auxiliary, 0, 0);
        (0..n).map(|_| { let z: f64 = StandardNormal.sample(&mut rng); shift + z }).collect()
    }

    #[test]
    fn self_coupling_is_tiny() {
        let q = normal_scores(10_000);
        assert!(wasserstein_to_normal(&q).unwrap() < 1e-3);
        let k = kolmogorov_to_normal(&q).unwrap(); assert!(k <= 0.5 / 10_000.0 + 1e-9, "{k:e}");
    }

    #[test]
    fn shift_and_point_mass() {
        let x = normals(100_000, 0.5, 1);
        assert!((wasserstein_to_normal(&x).unwrap() - 0.5).abs() < 0.01);
        let zeros = vec![0.0; 100_000];
        let w = wasserstein_to_normal(&zeros).unwrap();
        assert!((w - (2.0 / std::f64::consts::PI).sqrt()).abs() < 0.01);
        assert!((kolmogorov_to_normal(&zeros).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(standardize(&zeros), Err(Error::Degenerate(_))));
    }

    #[test]
    fn standardization_is_idempotent() {
        let x: Vec<f64> = normals(500, 0.0, 2).iter().map(|v| 3.0 * v + 7.0).collect();
        let z = standardize(&x).unwrap();
        let a = wasserstein_to_normal(&z).unwrap();
        let b = wasserstein_to_normal(&standardize(&z).unwrap()).unwrap();
        assert!((a - b).abs() < 1e-12);
        let e = distance_estimate(&x, 10, 0.95, 1, 0).unwrap();
        assert!((e.wasserstein - a).abs() < 1e-12);
    }

    #[test]
    fn gaussian_sample_satisfies_kolmogorov_relation() {
        let x = normals(2000, 0.0, 3);
        let e = distance_estimate(&x, 200, 0.95, 3, 0).unwrap();
        assert!(e.wasserstein < 0.06 && e.kolmogorov < 0.05);
        assert!(e.kolmogorov_bound_holds(3.0));
        assert!(e.w_ci.0 <= e.w_ci.1);
    }
}
