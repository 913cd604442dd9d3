use serde::{Deserialize, Serialize};

use super::ensemble::Ensemble;
use super::moments::{mean, mean_se};
use crate::error::{invalid, Result};

pub const MIN_RECORD_TIMES: usize = 5;
/// Largest admissible ratio of an increment moment to the fitted model.
pub const RATIO_LIMIT: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightnessRow {
    pub s: f64,
    pub t: f64,
    pub radius: f64,
    /// `E|F_R(t) - F_R(s)|²`.
    pub increment_msq: f64,
    pub se: f64,
    /// `C (t - s)² R^{2d-β}`.
    pub model: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublingRow {
    pub s: f64,
    pub t: f64,
    pub radius_small: f64,
    pub radius_large: f64,
    pub ratio: f64,
    pub expected: f64,
    pub se: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub c: f64,
    pub rows: Vec<TightnessRow>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Every ratio is at most 3.
    pub pass: bool,
    /// Increment ratios between consecutive radii against `(R'/R)^{2d-β}`.
    pub doubling: Vec<DoublingRow>,
}

/// Mean of `(F_R(t) - F_R(s))²` and its SE.
pub fn increment_moment(ens: &Ensemble, r: usize, i: usize, j: usize) -> (f64, f64) {
    let sq: Vec<f64> = ens.values[r][i]
        .iter()
        .zip(&ens.values[r][j])
        .map(|(a, b)| (b - a) * (b - a))
        .collect();
    (mean(&sq), mean_se(&sq))
}

/// Least-squares fit of `E|F_R(t) - F_R(s)|² ≈ C (t - s)² R^{2d-β}` over all pairs `s < t`
/// and all radii.
pub fn tightness_modulus(ens: &Ensemble, dim: usize, beta: f64) -> Result<TightnessReport> {
    if ens.times.len() < MIN_RECORD_TIMES {
        return Err(invalid("times", format!("tightness needs at least {MIN_RECORD_TIMES} record times")));
    }
    let power = 2.0 * dim as f64 - beta;
    let mut raw = Vec::new();
    for (r, &radius) in ens.radii.iter().enumerate() {
        for i in 0..ens.times.len() {
            for j in i + 1..ens.times.len() {
                let (m, se) = increment_moment(ens, r, i, j);
                let h = ens.times[j] - ens.times[i];
                raw.push((ens.times[i], ens.times[j], radius, m, se, h * h * radius.powf(power)));
            }
        }
    }
    let (num, den) = raw.iter().fold((0.0, 0.0), |(n, d), &(.., m, _, x)| (n + m * x, d + x * x));
    let c = num / den;
    let rows: Vec<TightnessRow> = raw
        .iter()
        .map(|&(s, t, radius, m, se, x)| TightnessRow {
            s,
            t,
            radius,
            increment_msq: m,
            se,
            model: c * x,
            ratio: m / (c * x),
        })
        .collect();
    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);

    let nt = ens.times.len();
    let pairs = nt * (nt - 1) / 2;
    let mut doubling = Vec::new();
    for r in 1..ens.radii.len() {
        let (small, large) = (ens.radii[r - 1], ens.radii[r]);
        let expected = (large / small).powf(power);
        for p in 0..pairs {
            let a = &rows[(r - 1) * pairs + p];
            let b = &rows[r * pairs + p];
            let ratio = b.increment_msq / a.increment_msq;
            let se = ratio * ((a.se / a.increment_msq).powi(2) + (b.se / b.increment_msq).powi(2)).sqrt();
            doubling.push(DoublingRow {
                s: a.s,
                t: a.t,
                radius_small: small,
                radius_large: large,
                ratio,
                expected,
                se,
                z: (ratio - expected) / se,
            });
        }
    }
    Ok(TightnessReport {
        c,
        pass: max_ratio <= RATIO_LIMIT,
        rows,
        min_ratio,
        max_ratio,
        doubling,
    })
}
