//! The free-wave Fourier multiplier `sin(2πt|ξ|)/(2π|ξ|)`, the Bessel multiplier
//! `(1+|ξ|²)^{-α/2}` that dominates it, and a randomized check of the bounds relating them.

use rand::Rng;
use serde::Serialize;

use crate::rng::{self, Domain};
use crate::scalar::Scalar;

/// Fourier transform of the wave kernel at time `t` and radial wavenumber `r = |ξ|`.
///
/// Zero for `t <= 0`; equals `t` at `r = 0`.
#[inline]
pub fn wave_multiplier<S: Scalar>(t: S, r: S) -> S {
    if t <= S::zero() {
        return S::zero();
    }
    let two_pi = S::of(2.0) * S::PI();
    let x = two_pi * t * r;
    if x.abs() < S::of(1e-3) {
        let x2 = x * x;
        t * (S::one() - x2 / S::of(6.0) * (S::one() - x2 / S::of(20.0)))
    } else {
        x.sin() / (two_pi * r)
    }
}

/// `F b_α(ξ) = (1 + |ξ|²)^{-α/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselMultiplier<S: Scalar> {
    pub alpha: S,
}

impl<S: Scalar> BesselMultiplier<S> {
    pub fn new(alpha: S) -> Self {
        assert!(alpha > S::zero(), "Bessel order must be positive");
        Self { alpha }
    }

    #[inline]
    pub fn value(&self, r: S) -> S {
        (S::one() + r * r).powf(-self.alpha / S::of(2.0))
    }
}

/// Worst (smallest) margin seen for each inequality; all must be `>= 0`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub horizon: f64,
    pub samples: usize,
    /// `t - |m(t, r)|`
    pub sup_bound: f64,
    /// `(1 + 2T²)/(1 + r²) - m(t, r)²`
    pub decay_bound: f64,
    /// `|t - s| - |m(t, r) - m(s, r)|`
    pub lipschitz_bound: f64,
    /// `|t - s| - 2|m(|t - s|/2, r)|`: the intermediate Lipschitz bound
    pub half_gap_bound: f64,
    /// `√(1 + 2T²) (1 + r²)^{-1/2} - |m(t, r)|`
    pub bessel_domination: f64,
    pub pass: bool,
}

impl BoundReport {
    pub fn worst_margin(&self) -> f64 {
        [
            self.sup_bound,
            self.decay_bound,
            self.lipschitz_bound,
            self.half_gap_bound,
            self.bessel_domination,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }
}

/// Draws `samples` triples `(t, s, r)` with `t, s ∈ [0, T]`, `r ∈ [0, 10³]` and records the
/// worst margin of each multiplier inequality. The first draws pin the edges `r = 0`,
/// `t = T`, `s = 0`.
pub fn multiplier_bound_suite(horizon: f64, samples: usize, seed: u64) -> BoundReport {
    assert!(samples >= 1, "at least one sample is required");
    let mut rng = rng::stream(seed, Domain::Auxiliary, 0, 0);
    let bessel = BesselMultiplier::new(1.0);
    let growth = 1.0 + 2.0 * horizon * horizon;
    let mut report = BoundReport {
        horizon,
        samples,
        sup_bound: f64::INFINITY,
        decay_bound: f64::INFINITY,
        lipschitz_bound: f64::INFINITY,
        half_gap_bound: f64::INFINITY,
        bessel_domination: f64::INFINITY,
        pass: false,
    };
    for i in 0..samples {
        let (t, s, r) = match i {
            0 => (horizon, 0.0, 0.0),
            1 => (horizon, 0.0, 1e-9),
            2 => (horizon, horizon, 0.0),
            _ => (
                rng.random::<f64>() * horizon,
                rng.random::<f64>() * horizon,
                rng.random::<f64>() * 1e3,
            ),
        };
        let mt = wave_multiplier(t, r);
        let ms = wave_multiplier(s, r);
        let gap = (t - s).abs();
        let half = 2.0 * wave_multiplier(gap / 2.0, r).abs();
        report.sup_bound = report.sup_bound.min(t - mt.abs());
        report.decay_bound = report.decay_bound.min(growth / (1.0 + r * r) - mt * mt);
        report.lipschitz_bound = report.lipschitz_bound.min(gap - (mt - ms).abs());
        report.half_gap_bound = report.half_gap_bound.min(gap - half);
        report.bessel_domination = report.bessel_domination.min(growth.sqrt() * bessel.value(r) - mt.abs());
    }
    report.pass = report.worst_margin() >= 0.0;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn multiplier_examples() {
        assert_eq!(wave_multiplier(0.0, 3.7), 0.0);
        assert_eq!(wave_multiplier(-1.0, 3.7), 0.0);
        assert_eq!(wave_multiplier(0.8, 0.0), 0.8);
        assert!((wave_multiplier(0.5, 0.5) - 1.0 / PI).abs() < 1e-15);
        assert!((wave_multiplier(0.5f32, 0.5f32) - (1.0 / PI) as f32).abs() < 1e-6);
    }

    #[test]
    fn series_branch_is_continuous() {
        let t = 0.7;
        let r_switch = 1e-3 / (2.0 * PI * t);
        let below = wave_multiplier(t, r_switch * (1.0 - 1e-9));
        let above = wave_multiplier(t, r_switch * (1.0 + 1e-9));
        assert!((below - above).abs() < 1e-14);
    }

    #[test]
    fn bessel_multiplier_is_normalized() {
        let b = BesselMultiplier::new(1.0);
        assert_eq!(b.value(0.0), 1.0);
        assert!((b.value(3.0) - 1.0 / 10f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bound_suite_passes_on_large_sample() {
        let report = multiplier_bound_suite(2.0, 100_000, 1);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn zero_horizon_is_trivial() {
        let report = multiplier_bound_suite(0.0, 1000, 2);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.sup_bound, 0.0);
    }

    #[test]
    fn origin_edge_reads_t_squared_bound() {
        // At r = 0 the decay bound is 1 + 2T² - t², positive for t <= T.
        let report = multiplier_bound_suite(2.0, 3, 3);
        assert!((report.decay_bound - (1.0 + 8.0 - 4.0)).abs() < 1e-12);
    }
}
