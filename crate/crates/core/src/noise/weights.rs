use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::grid::TorusGrid;
use crate::error::{invalid, Result};
use crate::fft::FftNd;
use crate::kernels::riesz::RieszKernel;
use crate::quad::gauss_legendre;
use crate::scalar::Scalar;

/// Variance assigned to the `k = 0` mode, where `|ξ|^{β-d}` has no value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroMode {
    /// `w_0 = 0`: the field has zero mean over the torus.
    Drop,
    /// `w_0 = (2L)^{-d} ∫_{[-L,L]^d} |x|^{-β} dx`, the torus mean of the kernel.
    #[default]
    TorusMean,
}

/// `∫_{[-1,1]^d} |x|^{-β} dx`, by splitting the cube into `2d` pyramids over its faces.
pub fn unit_cube_riesz_integral(dim: usize, beta: f64) -> f64 {
    let d = dim as f64;
    if dim == 1 {
        return 2.0 / (1.0 - beta);
    }
    // Face integral ∫_{[-1,1]^{d-1}} (1 + |q|²)^{-β/2} dq; the integrand is analytic in a
    // strip around the cube, so a tensor Gauss rule is exact to rounding.
    let (x, w) = gauss_legendre(40);
    let m = dim - 1;
    let total_points = x.len().pow(m as u32);
    let mut face = 0.0;
    for flat in 0..total_points {
        let (mut rem, mut q2, mut weight) = (flat, 0.0, 1.0);
        for _ in 0..m {
            let i = rem % x.len();
            rem /= x.len();
            q2 += x[i] * x[i];
            weight *= w[i];
        }
        face += weight * (1.0 + q2).powf(-beta / 2.0);
    }
    2.0 * d / (d - beta) * face
}

/// Per-mode variances `w_k` of the spectral noise on a torus grid.
#[derive(Debug, Clone)]
pub struct SpectralWeights {
    pub grid: TorusGrid,
    pub riesz: RieszKernel,
    pub zero_mode: ZeroMode,
    w: Vec<f64>,
}

impl SpectralWeights {
    pub fn build(grid: TorusGrid, riesz: RieszKernel, zero_mode: ZeroMode) -> Result<Self> {
        if grid.dim != riesz.dim {
            return Err(invalid("dim", format!("grid dimension {} differs from kernel dimension {}", grid.dim, riesz.dim)));
        }
        // Re-validates admissibility for kernels deserialized without `RieszKernel::new`.
        let riesz = RieszKernel::new(riesz.dim, riesz.beta)?;
        let d = grid.dim as i32;
        let volume = (2.0 * grid.half_period).powi(d);
        let dxi = grid.dxi();
        let w: Vec<f64> = grid
            .norm2_table()
            .into_iter()
            .map(|k2| {
                if k2 == 0 {
                    match zero_mode {
                        ZeroMode::Drop => 0.0,
                        ZeroMode::TorusMean => {
                            grid.half_period.powf(riesz.dim as f64 - riesz.beta)
                                * unit_cube_riesz_integral(riesz.dim, riesz.beta)
                                / volume
                        }
                    }
                } else {
                    riesz.density((k2 as f64).sqrt() * dxi) / volume
                }
            })
            .collect();
        let dalang: f64 = grid
            .norm2_table()
            .iter()
            .zip(&w)
            .map(|(&k2, &wk)| wk / (1.0 + k2 as f64 * dxi * dxi))
            .sum();
        if !dalang.is_finite() || w.iter().any(|v| !(*v >= 0.0)) {
            return Err(invalid("weights", "spectral weights are not finite and non-negative"));
        }
        Ok(Self {
            grid,
            riesz,
            zero_mode,
            w,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.w
    }

    /// Copy with one mode's weight replaced; used for fault injection.
    pub fn with_mode(&self, idx: usize, value: f64) -> Self {
        let mut out = self.clone();
        out.w[idx] = value;
        out
    }

    /// `Σ_k dt·w_k cos(2π ξ_k·h)` for a displacement `h` given in cells.
    pub fn covariance(&self, dt: f64, shift: &[i64]) -> f64 {
        let g = &self.grid;
        let scale = 2.0 * std::f64::consts::PI / g.n as f64;
        self.w
            .iter()
            .enumerate()
            .map(|(idx, wk)| {
                let phase: f64 = g.coords(idx).iter().zip(shift).map(|(k, h)| (k * h) as f64).sum();
                dt * wk * (scale * phase).cos()
            })
            .sum()
    }

    /// Per-mode amplitudes `sqrt(dt·w_k)` in the solver's precision.
    pub fn amplitudes<S: Scalar>(&self, dt: f64) -> Vec<S> {
        self.w.iter().map(|wk| S::of((dt * wk).sqrt())).collect()
    }

    /// Spectral coefficients `a_k = sqrt(dt·w_k) Z_k` of one increment.
    pub fn sample_spectral<S: Scalar, R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> Vec<Complex<S>> {
        let amp = self.amplitudes::<S>(dt);
        let partner = self.grid.partner_table();
        let mut out = vec![Complex::new(S::zero(), S::zero()); amp.len()];
        hermitian_gaussian(&amp, &partner, rng, &mut out);
        out
    }

    /// Physical-space increment with covariance `Σ_k dt·w_k e^{2πiξ_k·(x-y)}`.
    pub fn sample_increment<S: Scalar, R: Rng + ?Sized>(&self, fft: &FftNd<S>, dt: f64, rng: &mut R) -> NoiseIncrement<S> {
        let mut field = self.sample_spectral::<S, R>(dt, rng);
        fft.inverse(&mut field);
        let imag_residue = field.iter().fold(0.0f64, |m, z| m.max(z.im.as_f64().abs()));
        NoiseIncrement {
            values: field.into_iter().map(|z| z.re).collect(),
            imag_residue,
        }
    }
}

/// Fills `out` with `amp_k Z_k`, `Z` Hermitian (`Z_{-k} = conj Z_k`) with `E|Z_k|² = 1`.
/// Self-conjugate modes get real standard normals. Draw order is the flat index order.
pub fn hermitian_gaussian<S: Scalar, R: Rng + ?Sized>(
    amp: &[S],
    partner: &[usize],
    rng: &mut R,
    out: &mut [Complex<S>],
) {
    let half = S::FRAC_1_SQRT_2();
    for idx in 0..amp.len() {
        let p = partner[idx];
        if p == idx {
            out[idx] = Complex::new(amp[idx] * S::standard_normal(rng), S::zero());
        } else if p > idx {
            let re = S::standard_normal(rng) * half * amp[idx];
            let im = S::standard_normal(rng) * half * amp[idx];
            out[idx] = Complex::new(re, im);
            out[p] = Complex::new(re, -im);
        }
    }
}

/// Real noise field over one time step.
#[derive(Debug, Clone)]
pub struct NoiseIncrement<S> {
    pub values: Vec<S>,
    /// Largest `|Im|` left by the inverse transform before it was discarded.
    pub imag_residue: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Domain};
    use crate::quad::Integrator;

    fn kernel() -> RieszKernel {
        RieszKernel::new(1, 0.5).unwrap()
    }

    #[test]
    fn weight_example_and_symmetry() {
        let g = TorusGrid::new(1, 8, 4.0).unwrap();
        let w = SpectralWeights::build(g, kernel(), ZeroMode::Drop).unwrap();
        assert!((w.values()[1] - 2f64.powf(1.5) / 8.0).abs() < 1e-14);
        assert_eq!(w.values()[0], 0.0);
        let p = g.partner_table();
        for idx in 0..g.len() {
            assert_eq!(w.values()[idx], w.values()[p[idx]]);
        }
    }

    #[test]
    fn torus_mean_zero_mode() {
        let g = TorusGrid::new(1, 8, 4.0).unwrap();
        let w = SpectralWeights::build(g, kernel(), ZeroMode::TorusMean).unwrap();
        // (1/8) ∫_{-4}^{4} |x|^{-1/2} dx = 2·2·2 / 8.
        assert!((w.values()[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cube_integral_matches_adaptive_quadrature() {
        let q = Integrator::default();
        // d = 2: integrate over the square with polar-free nested quadrature.
        let beta = 0.7;
        let nested = q
            .integrate(
                |x| {
                    q.integrate_over(|y| (x * x + y * y).powf(-beta / 2.0), &[-1.0, 0.0, 1.0], "inner")
                        .unwrap()
                },
                -1.0,
                1.0,
                "outer",
            )
            .unwrap();
        assert!((unit_cube_riesz_integral(2, beta) / nested - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_inadmissible_kernels() {
        let g = TorusGrid::new(1, 8, 4.0).unwrap();
        let bad = RieszKernel { dim: 1, beta: 1.2, c: 1.0 };
        assert!(matches!(
            SpectralWeights::build(g, bad, ZeroMode::Drop),
            Err(crate::Error::Dalang { .. })
        ));
    }

    #[test]
    fn fields_are_real_and_deterministic() {
        let g = TorusGrid::new(2, 16, 4.0).unwrap();
        let w = SpectralWeights::build(g, RieszKernel::new(2, 1.0).unwrap(), ZeroMode::TorusMean).unwrap();
        let fft = FftNd::<f64>::new(2, 16);
        let a = w.sample_increment(&fft, 0.01, &mut stream(5, Domain::Noise, 0, 0));
        let b = w.sample_increment(&fft, 0.01, &mut stream(5, Domain::Noise, 0, 0));
        assert!(a.imag_residue < 1e-12);
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn spectral_covariance_at_origin_is_weight_sum() {
        let g = TorusGrid::new(1, 32, 4.0).unwrap();
        let w = SpectralWeights::build(g, kernel(), ZeroMode::TorusMean).unwrap();
        let sum: f64 = w.values().iter().sum();
        assert!((w.covariance(0.5, &[0]) - 0.5 * sum).abs() < 1e-12);
    }
}
