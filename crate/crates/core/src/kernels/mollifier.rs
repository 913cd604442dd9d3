//! Radial bump mollifiers `Λ_n(x) = a_n^d Λ(a_n x)` with `a_n = 2^n` and their Fourier transforms.

use std::f64::consts::PI;

use super::riesz::MAX_DIM;
use super::special::sphere_area;
use crate::error::{invalid, Result};
use crate::quad::{composite_rule, gauss_legendre};

const PROFILE_PANELS: usize = 512;
const PROFILE_ORDER: usize = 8;
const RADIAL_ORDER: usize = 48;

/// Unnormalized base bump as a function of `|x|²`.
#[inline]
fn bump(r2: f64) -> f64 {
    if r2 >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r2)).exp()
    }
}

/// The bump family in dimension `d`, with its projection profile
/// `P(s) = ∫_{R^{d-1}} Λ(s, y) dy` tabulated on a composite Gauss rule over `[0, 1]`.
///
/// Because the bump is radial, `FΛ(ξ) = ∫ P(s) cos(2π|ξ|s) ds`, which reduces every transform
/// to a single 1-D sum.
#[derive(Debug, Clone)]
pub struct MollifierFamily {
    dim: usize,
    nodes: Vec<f64>,
    /// Quadrature weight times profile value.
    weighted_profile: Vec<f64>,
    half_mass: f64,
}

impl MollifierFamily {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(invalid("dim", format!("dimension {dim} is outside 1..={MAX_DIM}")));
        }
        let (nodes, weights) = composite_rule(0.0, 1.0, PROFILE_PANELS, PROFILE_ORDER);
        let (gx, gw) = gauss_legendre(RADIAL_ORDER);
        let profile = |s: f64| -> f64 {
            if dim == 1 {
                return bump(s * s);
            }
            let top = (1.0 - s * s).max(0.0).sqrt();
            let inner: f64 = gx
                .iter()
                .zip(&gw)
                .map(|(x, w)| {
                    let rho = 0.5 * top * (x + 1.0);
                    0.5 * top * w * bump(s * s + rho * rho) * rho.powi(dim as i32 - 2)
                })
                .sum();
            sphere_area(dim - 1) * inner
        };
        let weighted_profile: Vec<f64> = nodes.iter().zip(&weights).map(|(&s, &w)| w * profile(s)).collect();
        let half_mass = weighted_profile.iter().sum();
        Ok(Self {
            dim,
            nodes,
            weighted_profile,
            half_mass,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∫ exp(-1/(1-|x|²)) dx` over the unit ball; the base bump is this function divided by it.
    pub fn mass(&self) -> f64 {
        2.0 * self.half_mass
    }

    /// Scale `a_n = 2^n`.
    pub fn scale(n: u32) -> f64 {
        2f64.powi(n as i32)
    }

    /// `FΛ(q)` at radial frequency `q = |ξ|`. Exactly 1 at `q = 0` and never above 1 in
    /// absolute value, since the profile weights are non-negative.
    pub fn base_transform(&self, q: f64) -> f64 {
        if q == 0.0 {
            return 1.0;
        }
        let w = 2.0 * PI * q;
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weighted_profile)
            .map(|(&x, &p)| p * (w * x).cos())
            .sum();
        (s / self.half_mass).clamp(-1.0, 1.0)
    }

    /// `FΛ_n(ξ) = FΛ(ξ / a_n)` at `|ξ| = q`.
    pub fn transform(&self, n: u32, q: f64) -> f64 {
        self.base_transform(q / Self::scale(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::Integrator;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normalization_and_bounds() {
        for d in 1..=3 {
            let m = MollifierFamily::new(d).unwrap();
            assert_eq!(m.transform(1, 0.0), 1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(d as u64);
            for _ in 0..100_000 / 3 {
                let n = rng.random_range(1..=20);
                let q = rng.random_range(0.0..2000.0);
                assert!(m.transform(n, q).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn mass_matches_radial_quadrature() {
        let q = Integrator::default();
        for d in 1..=3 {
            let m = MollifierFamily::new(d).unwrap();
            let radial = q
                .integrate(|r| sphere_area(d) * r.powi(d as i32 - 1) * bump(r * r), 0.0, 1.0, "mass")
                .unwrap();
            assert!((m.mass() / radial - 1.0).abs() < 1e-9, "d = {d}");
        }
    }

    #[test]
    fn transform_matches_direct_radial_quadrature() {
        // In d = 3 the radial transform of f is (2/q) ∫ r f(r) sin(2π q r) dr.
        let m = MollifierFamily::new(3).unwrap();
        let quad = Integrator::default();
        for q in [0.3, 1.0, 2.7] {
            let direct = quad
                .integrate(|r| 2.0 * r * bump(r * r) * (2.0 * PI * q * r).sin() / q, 0.0, 1.0, "ft")
                .unwrap();
            assert!((m.base_transform(q) - direct / m.mass()).abs() < 1e-9, "q = {q}");
        }
    }

    #[test]
    fn convergence_in_n_and_decay() {
        let m = MollifierFamily::new(1).unwrap();
        for q in [0.1, 0.5, 1.0] {
            let e5 = (1.0 - m.transform(5, q)).abs();
            let e10 = (1.0 - m.transform(10, q)).abs();
            assert!(e10 < e5, "q = {q}");
            assert!((1.0 - m.transform(20, q)).abs() < 1e-9);
        }
        assert!(m.transform(1, 1000.0).abs() < 1e-3);
    }
}
