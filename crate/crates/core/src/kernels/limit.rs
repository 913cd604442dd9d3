//! Limiting variance and covariance of the rescaled spatial averages.

use serde::{Deserialize, Serialize};

use super::riesz::{tau_beta, RieszKernel};
use crate::error::{invalid, Result};

/// `τ_β` together with tabulated paths `s ↦ E[σ(U(s,0))²]` and `s ↦ E[σ(U(s,0))]²`.
///
/// Paths are read as piecewise linear on `times`; each integral is then evaluated exactly
/// interval by interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitFunctional {
    pub riesz: RieszKernel,
    pub tau: f64,
    times: Vec<f64>,
    mean_square: Vec<f64>,
    squared_mean: Vec<f64>,
}

impl LimitFunctional {
    /// `times` must start at 0 and increase strictly; `mean_path` is `E[σ(U(s,0))]`.
    pub fn new(riesz: RieszKernel, times: Vec<f64>, mean_square_path: Vec<f64>, mean_path: &[f64]) -> Result<Self> {
        let tau = tau_beta(riesz.dim, riesz.beta)?;
        Self::with_tau(riesz, tau, times, mean_square_path, mean_path)
    }

    pub fn with_tau(
        riesz: RieszKernel,
        tau: f64,
        times: Vec<f64>,
        mean_square_path: Vec<f64>,
        mean_path: &[f64],
    ) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid("tau", format!("must be positive, got {tau}")));
        }
        if times.is_empty() || times[0] != 0.0 {
            return Err(invalid("times", "grid must start at 0"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("times", "grid must be strictly increasing"));
        }
        if mean_square_path.len() != times.len() || mean_path.len() != times.len() {
            return Err(invalid("paths", "path lengths must match the time grid"));
        }
        if mean_square_path.iter().any(|v| !(*v >= 0.0)) {
            return Err(invalid("mean_square_path", "entries must be finite and non-negative"));
        }
        Ok(Self {
            riesz,
            tau,
            times,
            mean_square: mean_square_path,
            squared_mean: mean_path.iter().map(|m| m * m).collect(),
        })
    }

    /// Deterministic `σ ≡ value` on `[0, horizon]`.
    pub fn constant(riesz: RieszKernel, value: f64, horizon: f64) -> Result<Self> {
        let times = if horizon > 0.0 { vec![0.0, horizon] } else { vec![0.0] };
        let n = times.len();
        Self::new(riesz, times, vec![value * value; n], &vec![value; n])
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("non-empty grid")
    }

    fn check_time(&self, t: f64, name: &'static str) -> Result<()> {
        if !(0.0..=self.horizon()).contains(&t) {
            return Err(invalid(name, format!("{t} outside tabulated range [0, {}]", self.horizon())));
        }
        Ok(())
    }

    /// `τ_β ∫_0^t (t - s)² E[σ(U(s,0))²] ds`.
    pub fn limiting_variance(&self, t: f64) -> Result<f64> {
        self.check_time(t, "t")?;
        Ok(self.tau * integrate_path(&self.times, &self.mean_square, t, |r| (t - r) * (t - r)))
    }

    /// `Φ(s, t) = τ_β ∫_0^{s∧t} (s - r)(t - r) E[σ(U(r,0))]² dr`; symmetric bit for bit.
    pub fn limiting_covariance(&self, s: f64, t: f64) -> Result<f64> {
        self.check_time(s, "s")?;
        self.check_time(t, "t")?;
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        Ok(self.tau * integrate_path(&self.times, &self.squared_mean, lo, |r| (lo - r) * (hi - r)))
    }
}

/// `∫_0^upper kernel(r) path(r) dr` with `path` linear between nodes and `kernel` quadratic,
/// so Simpson's rule on each piece is exact.
fn integrate_path(times: &[f64], path: &[f64], upper: f64, kernel: impl Fn(f64) -> f64) -> f64 {
    let value_at = |i: usize, r: f64| -> f64 {
        let (t0, t1) = (times[i], times[i + 1]);
        let w = (r - t0) / (t1 - t0);
        path[i] * (1.0 - w) + path[i + 1] * w
    };
    let mut total = 0.0;
    for i in 0..times.len().saturating_sub(1) {
        let a = times[i];
        if a >= upper {
            break;
        }
        let b = times[i + 1].min(upper);
        let m = 0.5 * (a + b);
        let f = |r: f64| kernel(r) * value_at(i, r);
        total += (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel() -> RieszKernel {
        RieszKernel::new(1, 0.5).unwrap()
    }

    #[test]
    fn constant_sigma_examples() {
        let lf = LimitFunctional::constant(kernel(), 1.0, 1.0).unwrap();
        assert_eq!(lf.limiting_variance(0.0).unwrap(), 0.0);
        assert!((lf.limiting_variance(1.0).unwrap() - 2.514_157).abs() < 1e-6);
        assert!((lf.limiting_covariance(0.5, 1.0).unwrap() - 0.785_674).abs() < 1e-6);
        assert_eq!(lf.limiting_covariance(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_matches_cubic() {
        let times: Vec<f64> = (0..=37).map(|i| i as f64 / 37.0 * 2.0).collect();
        let ones = vec![1.0; times.len()];
        let lf = LimitFunctional::new(kernel(), times, ones.clone(), &ones).unwrap();
        for t in [0.1, 0.77, 1.3, 2.0] {
            let want = lf.tau * t * t * t / 3.0;
            assert!((lf.limiting_covariance(t, t).unwrap() - want).abs() < 1e-8 * want.max(1.0));
            assert!((lf.limiting_variance(t).unwrap() - want).abs() < 1e-8 * want.max(1.0));
        }
    }

    #[test]
    fn linear_path_integrated_exactly() {
        // m2(s) = 1 + s gives τ (t³/3 + t⁴/12).
        let times = vec![0.0, 0.3, 1.0];
        let m2: Vec<f64> = times.iter().map(|s| 1.0 + s).collect();
        let lf = LimitFunctional::new(kernel(), times, m2, &[1.0, 1.0, 1.0]).unwrap();
        let t: f64 = 0.8;
        let want = lf.tau * (t.powi(3) / 3.0 + t.powi(4) / 12.0);
        assert!((lf.limiting_variance(t).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range() {
        let lf = LimitFunctional::constant(kernel(), 1.0, 1.0).unwrap();
        assert!(lf.limiting_variance(1.5).is_err());
        assert!(lf.limiting_covariance(-0.1, 0.5).is_err());
        assert!(LimitFunctional::new(kernel(), vec![0.1, 1.0], vec![1.0; 2], &[1.0; 2]).is_err());
    }
}
