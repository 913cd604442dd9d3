//! Continuum second moments of `F_R` in `d = 1` for `σ ≡ 1`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::kernels::RieszKernel;
use crate::quad::{gauss_legendre, Integrator};

const REFINEMENT_TOLERANCE: f64 = 1e-6;
const CUTOFF: f64 = 40.0;

/// `(1 - sin y / y) / y²`, stable near 0.
fn one_minus_sinc_over_square(y: f64) -> f64 {
    if y.abs() < 1e-2 {
        let y2 = y * y;
        1.0 / 6.0 - y2 / 120.0 + y2 * y2 / 5040.0 - y2 * y2 * y2 / 362_880.0
    } else {
        (1.0 - y.sin() / y) / (y * y)
    }
}

/// `(sin(2πRξ)/(πξ))²`, the squared transform of `1_{[-R,R]}`.
fn interval_energy(radius: f64, xi: f64) -> f64 {
    let y = 2.0 * PI * radius * xi;
    let sinc = if y.abs() < 1e-4 { 1.0 - y * y / 6.0 } else { y.sin() / y };
    4.0 * radius * radius * sinc * sinc
}

/// `∫_0^t (sin(2π(t-s)ξ)/(2πξ))² ds`.
fn variance_time_factor(t: f64, xi: f64) -> f64 {
    2.0 * t * t * t * one_minus_sinc_over_square(4.0 * PI * t * xi)
}

/// `∫_0^s (M(t-r) - M(s-r))² dr + ∫_s^t M(t-r)² dr` for `M(a) = sin(ωa)/ω`, `ω = 2πξ`.
fn increment_time_factor(s: f64, t: f64, xi: f64) -> f64 {
    let omega = 2.0 * PI * xi;
    let delta = t - s;
    if omega * t < 1e-2 {
        // The closed form cancels catastrophically here; Gauss rules on the smooth integrand.
        let (x, w) = gauss_legendre(16);
        let m = |a: f64| crate::kernels::wave_multiplier(a, xi);
        let mut first = 0.0;
        let mut second = 0.0;
        for (xi_, wi) in x.iter().zip(&w) {
            let r = 0.5 * s * (xi_ + 1.0);
            first += 0.5 * s * wi * (m(t - r) - m(s - r)).powi(2);
            let r = s + 0.5 * delta * (xi_ + 1.0);
            second += 0.5 * delta * wi * m(t - r).powi(2);
        }
        return first + second;
    }
    let half = (0.5 * omega * delta).sin();
    let cos_part = 0.5 * s + ((omega * (2.0 * s + delta)).sin() - (omega * delta).sin()) / (4.0 * omega);
    let tail = 0.5 * delta - (2.0 * omega * delta).sin() / (4.0 * omega);
    (4.0 * half * half * cos_part + tail) / (omega * omega)
}

fn check(riesz: &RieszKernel, radius: f64, times: &[f64]) -> Result<()> {
    if riesz.dim != 1 {
        return Err(invalid("dim", "the continuum quadrature oracle is one-dimensional"));
    }
    if !(radius > 0.0) {
        return Err(invalid("radius", "must be positive"));
    }
    if times.iter().any(|t| !(*t >= 0.0)) {
        return Err(invalid("t", "times must be non-negative"));
    }
    Ok(())
}

/// `2c ∫_0^∞ energy(ξ) ξ^{β-1} factor(ξ) dξ` with panels of width `panel`, the
/// singular first panel absorbed by the endpoint-power substitution, and the tail beyond
/// `CUTOFF` replaced by its mean.
fn spectral_integral(riesz: &RieszKernel, radius: f64, panel: f64, factor: &dyn Fn(f64) -> f64, tail_time: f64) -> Result<f64> {
    let beta = riesz.beta;
    let q = Integrator::with_rel_tol(1e-10);
    let integrand = |xi: f64| interval_energy(radius, xi) * factor(xi);
    let head = q.integrate_endpoint_power(integrand, 0.0, panel, beta - 1.0, "variance quadrature head")?;
    let panels = (CUTOFF / panel).ceil() as usize;
    let breaks: Vec<f64> = (1..=panels).map(|i| i as f64 * panel).collect();
    let body = q.integrate_over(|xi| integrand(xi) * xi.powf(beta - 1.0), &breaks, "variance quadrature body")?;
    let end = *breaks.last().unwrap_or(&panel);
    // Mean integrand at large ξ: (1/(2π²ξ²)) · ξ^{β-1} · tail_time/(4π²ξ²).
    let tail = tail_time * end.powf(beta - 4.0) / (8.0 * PI.powi(4) * (4.0 - beta));
    Ok(2.0 * riesz.c * (head + body + tail))
}

fn refined(riesz: &RieszKernel, radius: f64, scale: f64, factor: &dyn Fn(f64) -> f64, tail_time: f64, context: &str) -> Result<f64> {
    let panel = 1.0 / (2.0 * scale);
    let coarse = spectral_integral(riesz, radius, panel, factor, tail_time)?;
    let fine = spectral_integral(riesz, radius, 0.5 * panel, factor, tail_time)?;
    let disagreement = if fine != 0.0 { ((fine - coarse) / fine).abs() } else { (fine - coarse).abs() };
    if disagreement > REFINEMENT_TOLERANCE {
        return Err(Error::Quadrature {
            context: context.into(),
            estimate: fine,
            disagreement,
        });
    }
    Ok(fine)
}

/// `Var F_R(t)` on the real line for `σ ≡ 1`:
/// `c ∫ |F1_{[-R,R]}(ξ)|² |ξ|^{β-1} ∫_0^t (sin(2π(t-s)|ξ|)/(2π|ξ|))² ds dξ`.
pub fn exact_variance_quadrature(riesz: &RieszKernel, radius: f64, t: f64) -> Result<f64> {
    check(riesz, radius, &[t])?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let factor = move |xi: f64| variance_time_factor(t, xi);
    refined(riesz, radius, radius.max(t), &factor, 0.5 * t, "exact variance quadrature")
}

/// `E|F_R(t) - F_R(s)|²` on the real line for `σ ≡ 1`.
pub fn exact_increment_quadrature(riesz: &RieszKernel, radius: f64, s: f64, t: f64) -> Result<f64> {
    check(riesz, radius, &[s, t])?;
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    if s == t {
        return Ok(0.0);
    }
    let factor = move |xi: f64| increment_time_factor(s, t, xi);
    // Mean of the time factor at large ξ is (s(1 - cos ωδ) + δ/2)/ω²; the tail uses its
    // average over the fast oscillation, s + δ/2.
    refined(riesz, radius, radius.max(t), &factor, s + 0.5 * (t - s), "exact increment quadrature")
}
