//! The Riesz correlation `γ(x) = |x|^{-β}`: its spectral constant and the ball energy
//! `τ_β = ∫_{B_1 × B_1} |x - y|^{-β} dx dy`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::special::{ball_transform, sphere_area, unit_ball_volume};
use crate::error::{invalid, Error, Result};
use crate::quad::Integrator;

/// Largest dimension with closed-form ball transforms and overlap volumes.
pub const MAX_DIM: usize = 4;

/// Riesz correlation exponent together with its spectral constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszKernel {
    pub dim: usize,
    pub beta: f64,
    /// `c_{d,β}` with `F(|x|^{-β}) = c_{d,β} |ξ|^{β-d}`.
    pub c: f64,
}

impl RieszKernel {
    /// Admissible kernels only: `0 < β < min(2, d)`.
    pub fn new(dim: usize, beta: f64) -> Result<Self> {
        check_dalang(dim, beta)?;
        Ok(Self {
            dim,
            beta,
            c: riesz_constant(dim, beta)?,
        })
    }

    /// Spectral density `c |ξ|^{β-d}` at `|ξ| = r > 0`.
    #[inline]
    pub fn density(&self, r: f64) -> f64 {
        self.c * r.powf(self.beta - self.dim as f64)
    }

    /// `γ(x) = |x|^{-β}` at `|x| = r > 0`.
    #[inline]
    pub fn correlation(&self, r: f64) -> f64 {
        r.powf(-self.beta)
    }
}

pub(crate) fn check_dalang(dim: usize, beta: f64) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(invalid("dim", format!("dimension {dim} is outside 1..={MAX_DIM}")));
    }
    let bound = (dim as f64).min(2.0);
    if !(beta > 0.0 && beta < bound) {
        return Err(Error::Dalang { dim, beta, bound });
    }
    Ok(())
}

/// `c_{d,β} = π^{β - d/2} Γ((d - β)/2) / Γ(β/2)` for `0 < β < d`.
pub fn riesz_constant(dim: usize, beta: f64) -> Result<f64> {
    let d = dim as f64;
    if dim == 0 || !(beta > 0.0 && beta < d) {
        return Err(invalid("beta", format!("Riesz constant needs 0 < beta < d, got beta = {beta}, d = {dim}")));
    }
    Ok(PI.powf(beta - d / 2.0) * gamma((d - beta) / 2.0) / gamma(beta / 2.0))
}

/// `τ_β`, routed by dimension: the 1-D overlap reduction for `d = 1`, the Newton-potential
/// profile for `d = 3`, the Fourier representation otherwise.
pub fn tau_beta(dim: usize, beta: f64) -> Result<f64> {
    check_dalang(dim, beta)?;
    match dim {
        1 => tau_beta_overlap(dim, beta),
        3 => tau_beta_newton(beta),
        _ => tau_beta_fourier(dim, beta),
    }
}

/// `∫_x^1 (1 - s²)^{(d-1)/2} ds`.
fn cap_integral(dim: usize, x: f64) -> f64 {
    let x = x.clamp(-1.0, 1.0);
    let root = (1.0 - x * x).max(0.0).sqrt();
    match dim {
        1 => 1.0 - x,
        2 => 0.5 * (x.acos() - x * root),
        3 => (1.0 - x) - (1.0 - x * x * x) / 3.0,
        4 => {
            3.0 * PI / 16.0 - (x * root.powi(3) / 4.0 + 3.0 * x * root / 8.0 + 3.0 * x.asin() / 8.0)
        }
        _ => unreachable!("dimension checked by caller"),
    }
}

/// Volume of `B_1 ∩ (B_1 + h)` for `|h| = r ∈ [0, 2]`.
pub fn ball_overlap_volume(dim: usize, r: f64) -> f64 {
    if r >= 2.0 {
        return 0.0;
    }
    2.0 * unit_ball_volume(dim - 1) * cap_integral(dim, r / 2.0)
}

/// Real-space route: `τ_β = |S^{d-1}| ∫_0^2 r^{d-1-β} V_d(r) dr` with `V_d` the overlap volume.
pub fn tau_beta_overlap(dim: usize, beta: f64) -> Result<f64> {
    check_dalang(dim, beta)?;
    let q = Integrator::default();
    let power = dim as f64 - 1.0 - beta;
    let radial = q.integrate_endpoint_power(|r| ball_overlap_volume(dim, r), 0.0, 2.0, power, "tau_beta overlap")?;
    Ok(sphere_area(dim) * radial)
}

/// Fourier route: `τ_β = c_{d,β} ∫ |F1_{B_1}(ξ)|² |ξ|^{β-d} dξ`.
pub fn tau_beta_fourier(dim: usize, beta: f64) -> Result<f64> {
    check_dalang(dim, beta)?;
    let c = riesz_constant(dim, beta)?;
    let q = Integrator::default();
    let energy = |rho: f64| ball_transform(dim, rho).powi(2);
    let head = q.integrate_endpoint_power(energy, 0.0, 1.0, beta - 1.0, "tau_beta fourier head")?;
    // Panels of half a period of J² in ρ.
    let cutoff: f64 = 400.0;
    let breaks: Vec<f64> = (2..=(2.0 * cutoff) as usize).map(|k| k as f64 * 0.5).collect();
    let body = q.integrate_over(|rho| energy(rho) * rho.powf(beta - 1.0), &breaks, "tau_beta fourier body")?;
    // Mean of J_ν(2πρ)² is 1/(2π²ρ) to leading order.
    let tail = cutoff.powf(beta - dim as f64 - 1.0) / (2.0 * PI * PI * (dim as f64 + 1.0 - beta));
    Ok(c * sphere_area(dim) * (head + body + tail))
}

/// `d = 3` route through the ball potential `p(a) = ∫_{B_1} |x - y|^{-β} dy`, `|x| = a`.
pub fn tau_beta_newton(beta: f64) -> Result<f64> {
    check_dalang(3, beta)?;
    let q = Integrator::with_rel_tol(1e-11);
    let e = 2.0 - beta;
    let potential = |a: f64| -> f64 {
        let inner = |rho: f64| rho * ((a + rho).powf(e) - (a - rho).abs().powf(e));
        let v = q
            .integrate_over(inner, &[0.0, a, 1.0], "ball potential")
            .unwrap_or(f64::NAN);
        2.0 * PI / (e * a) * v
    };
    let value = q.integrate(|a| a * a * potential(a), 0.0, 1.0, "tau_beta newton")?;
    if !value.is_finite() {
        return Err(Error::Quadrature {
            context: "ball potential".into(),
            estimate: value,
            disagreement: f64::NAN,
        });
    }
    Ok(4.0 * PI * value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_form_1d(beta: f64) -> f64 {
        2f64.powf(3.0 - beta) / ((1.0 - beta) * (2.0 - beta))
    }

    #[test]
    fn riesz_constant_examples() {
        assert!((riesz_constant(1, 0.5).unwrap() - 1.0).abs() < 1e-14);
        assert!((riesz_constant(2, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((riesz_constant(3, 1.0).unwrap() - 1.0 / PI).abs() < 1e-14);
        assert!(riesz_constant(1, 1.0).is_err());
        assert!(riesz_constant(2, 0.0).is_err());
    }

    #[test]
    fn riesz_constant_transforms_against_gaussian() {
        // ∫ |x|^{-1} e^{-π|x|²} dx = c ∫ |ξ|^{-2} e^{-π|ξ|²} dξ in d = 3 (Parseval with a
        // self-dual Gaussian): both radial integrals reduce to 4π ∫ r^k e^{-πr²} dr.
        let q = Integrator::default();
        let lhs = q.integrate(|r| 4.0 * PI * r * (-PI * r * r).exp(), 0.0, 10.0, "lhs").unwrap();
        let rhs = q.integrate(|r| 4.0 * PI * (-PI * r * r).exp(), 0.0, 10.0, "rhs").unwrap();
        let c = riesz_constant(3, 1.0).unwrap();
        assert!((lhs - c * rhs).abs() < 1e-10);
    }

    #[test]
    fn dalang_guard() {
        assert!(matches!(RieszKernel::new(1, 1.0), Err(Error::Dalang { .. })));
        assert!(matches!(RieszKernel::new(3, 2.0), Err(Error::Dalang { .. })));
        assert!(RieszKernel::new(3, 1.5).is_ok());
    }

    #[test]
    fn tau_one_dimensional_closed_form() {
        for beta in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let got = tau_beta(1, beta).unwrap();
            assert!((got / closed_form_1d(beta) - 1.0).abs() < 1e-6, "beta = {beta}");
        }
        assert!((tau_beta(1, 0.5).unwrap() - 7.542_472).abs() < 1e-6);
        // β → 0 recovers |B_1|² = 4.
        assert!((tau_beta_overlap(1, 1e-9).unwrap() - 4.0).abs() < 1e-7);
    }

    #[test]
    fn tau_three_dimensional_newton_potential() {
        let want = 32.0 * PI * PI / 15.0;
        assert!((tau_beta(3, 1.0).unwrap() / want - 1.0).abs() < 1e-8);
        assert!((tau_beta_overlap(3, 1.0).unwrap() / want - 1.0).abs() < 1e-8);
    }

    #[test]
    fn fourier_and_real_space_routes_agree() {
        for (dim, beta) in [(1, 0.5), (1, 0.8), (2, 0.5), (2, 1.0), (2, 1.6), (3, 1.0)] {
            let real = tau_beta_overlap(dim, beta).unwrap();
            let fourier = tau_beta_fourier(dim, beta).unwrap();
            assert!((fourier / real - 1.0).abs() < 1e-4, "d = {dim}, beta = {beta}: {fourier} vs {real}");
        }
    }

    #[test]
    fn overlap_volume_endpoints() {
        for d in 1..=4 {
            assert!((ball_overlap_volume(d, 0.0) - unit_ball_volume(d)).abs() < 1e-12, "d = {d}");
            assert!(ball_overlap_volume(d, 2.0).abs() < 1e-15);
        }
    }
}
