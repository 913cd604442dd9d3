use serde::{Deserialize, Serialize};

use super::ensemble::Ensemble;
use super::moments::{covariance_jackknife, mean};
use crate::error::Result;
use crate::kernels::{LimitFunctional, RieszKernel};

pub const MIN_VARIANCE_REPLICATES: usize = 200;
pub const MIN_COVARIANCE_REPLICATES: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceRow {
    pub radius: f64,
    pub t: f64,
    pub var: f64,
    /// `R^{β-2d} · var`.
    pub normalized: f64,
    pub target: f64,
    pub rel_gap: f64,
    /// Jackknife SE of `normalized`.
    pub se: f64,
    pub z: f64,
}

/// `R^{β - 2d}`.
pub fn normalization(riesz: &RieszKernel, radius: f64) -> f64 {
    radius.powf(riesz.beta - 2.0 * riesz.dim as f64)
}

pub(crate) fn gap_and_z(value: f64, target: f64, se: f64) -> (f64, f64) {
    let rel = if target != 0.0 {
        (value - target) / target
    } else if value == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let z = if se > 0.0 {
        (value - target) / se
    } else if value == target {
        0.0
    } else {
        f64::INFINITY
    };
    (rel, z)
}

/// Normalized sample variance of `F_R(t)` against `limiting_variance(t)` for every (R, t).
pub fn variance_scaling(ens: &Ensemble, lf: &LimitFunctional) -> Result<Vec<VarianceRow>> {
    ens.require(MIN_VARIANCE_REPLICATES, "variance scaling")?;
    let mut rows = Vec::new();
    for (r, &radius) in ens.radii.iter().enumerate() {
        let scale = normalization(&lf.riesz, radius);
        for (j, &t) in ens.times.iter().enumerate() {
            let x = &ens.values[r][j];
            let (var, se) = covariance_jackknife(x, x);
            let normalized = scale * var;
            let target = lf.limiting_variance(t)?;
            let se = if se.is_nan() { 0.0 } else { scale * se };
            let (rel_gap, z) = gap_and_z(normalized, target, se);
            rows.push(VarianceRow {
                radius,
                t,
                var,
                normalized,
                target,
                rel_gap,
                se,
                z,
            });
        }
    }
    Ok(rows)
}

/// Plug-in limit functional: `E[σ(U(s,0))²]` and `E[σ(U(s,0))]` from the center trace.
pub fn estimated_limit(ens: &Ensemble, riesz: RieszKernel, tau: f64) -> Result<LimitFunctional> {
    let m2 = ens.center_sigma.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>() / c.len() as f64).collect();
    let m1: Vec<f64> = ens.center_sigma.iter().map(|c| mean(c)).collect();
    LimitFunctional::with_tau(riesz, tau, ens.times.clone(), m2, &m1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceCell {
    pub s: f64,
    pub t: f64,
    pub radius: f64,
    /// `R^{β-2d} · Cov(F_R(s), F_R(t))`.
    pub empirical: f64,
    pub se: f64,
    pub target: f64,
    pub rel_gap: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceSurface {
    pub radius: f64,
    pub cells: Vec<CovarianceCell>,
    /// Largest `|rel_gap|` over cells with a non-zero target.
    pub max_rel_gap: f64,
}

/// Normalized empirical covariance surface at radius index `r` against `Φ(s, t)`.
pub fn covariance_surface(ens: &Ensemble, lf: &LimitFunctional, r: usize) -> Result<CovarianceSurface> {
    ens.require(MIN_COVARIANCE_REPLICATES, "a covariance surface")?;
    let radius = ens.radii[r];
    let scale = normalization(&lf.riesz, radius);
    let mut cells = Vec::new();
    for (i, &s) in ens.times.iter().enumerate() {
        for (j, &t) in ens.times.iter().enumerate() {
            let (c, se) = covariance_jackknife(&ens.values[r][i], &ens.values[r][j]);
            let se = if se.is_nan() { 0.0 } else { scale * se };
            let empirical = scale * c;
            let target = lf.limiting_covariance(s, t)?;
            let (rel_gap, z) = gap_and_z(empirical, target, se);
            cells.push(CovarianceCell {
                s,
                t,
                radius,
                empirical,
                se,
                target,
                rel_gap,
                z,
            });
        }
    }
    let max_rel_gap = cells
        .iter()
        .filter(|c| c.target != 0.0)
        .map(|c| c.rel_gap.abs())
        .fold(0.0, f64::max);
    Ok(CovarianceSurface { radius, cells, max_rel_gap })
}
