//! Ball volumes, sphere areas, integer-order Bessel functions and the Fourier transform of
//! the unit-ball indicator.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

/// Volume of the unit ball in `R^d` (1 for `d = 0`).
pub fn unit_ball_volume(dim: usize) -> f64 {
    let h = dim as f64 / 2.0;
    PI.powf(h) / gamma(h + 1.0)
}

/// Surface area of the unit sphere `S^{d-1}` in `R^d` (2 for `d = 1`).
pub fn sphere_area(dim: usize) -> f64 {
    let h = dim as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// Bessel function of the first kind, integer order `n`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    puruspe::bessel::Jn(n, x)
}

/// `F 1_{B_1}(ρ)` for `|ξ| = ρ` with the `e^{-2πi ξ·x}` convention, `d ∈ {1, 2, 3, 4}`.
pub fn ball_transform(dim: usize, rho: f64) -> f64 {
    let x = 2.0 * PI * rho;
    match dim {
        1 => {
            if x.abs() < 1e-4 {
                2.0 * (1.0 - x * x / 6.0)
            } else {
                (x).sin() / (PI * rho)
            }
        }
        2 => {
            if rho == 0.0 {
                PI
            } else {
                bessel_j(1, x) / rho
            }
        }
        3 => {
            if x.abs() < 1e-2 {
                let x2 = x * x;
                4.0 * PI / 3.0 * (1.0 - x2 / 10.0 + x2 * x2 / 280.0)
            } else {
                (x.sin() / x - x.cos()) / (PI * rho * rho)
            }
        }
        4 => {
            if rho == 0.0 {
                PI * PI / 2.0
            } else {
                bessel_j(2, x) / (rho * rho)
            }
        }
        _ => panic!("ball transform implemented for d <= 4 only"),
    }
}
