//! Exact second moments of the spectral scheme itself when `σ` is affine.

use num_complex::Complex;

use crate::fft::FftNd;
use crate::kernels::wave_multiplier;
use crate::noise::SpectralWeights;
use crate::solver::{AverageStencil, Sigma};

/// Spectral densities `S^M_k` of `u(t_M) - 1` for `M = 0..=steps`, where
/// `E[(u_x - 1)(u_y - 1)] = Σ_k S_k e^{2πiξ_k·(x-y)}`.
///
/// With `σ(u) = a + b u` and independent kicks,
/// `S^M_k = Σ_{m<M} M_k(t_M - t_{m+1})² dt [(a+b)² w_k + b² (S^m ⊛ w)_k]`.
#[derive(Debug, Clone)]
pub struct SchemeMoments {
    pub dt: f64,
    pub spectra: Vec<Vec<f64>>,
}

impl SchemeMoments {
    pub fn compute(weights: &SpectralWeights, sigma: Sigma, dt: f64, steps: usize) -> Self {
        let grid = weights.grid;
        let len = grid.len();
        let w = weights.values();
        let (a, b) = sigma.affine();
        let at_one = (a + b) * (a + b);
        let b2 = b * b;
        let dxi = grid.dxi();
        let radii: Vec<f64> = grid.norm2_table().iter().map(|&k2| (k2 as f64).sqrt() * dxi).collect();
        // response[j][k] = M_k(j·dt)².
        let response: Vec<Vec<f64>> = (0..steps.max(1))
            .map(|j| radii.iter().map(|&r| wave_multiplier(j as f64 * dt, r).powi(2)).collect())
            .collect();
        let fft = FftNd::<f64>::new(grid.dim, grid.n);
        let w_phys = physical(&fft, w);
        let mut forcing: Vec<Vec<f64>> = Vec::with_capacity(steps);
        let mut spectra = vec![vec![0.0; len]];
        for m in 0..steps {
            let conv = if b2 == 0.0 { vec![0.0; len] } else { circular_convolution(&fft, &spectra[m], &w_phys) };
            forcing.push((0..len).map(|k| dt * (at_one * w[k] + b2 * conv[k])).collect());
            let next: Vec<f64> = (0..len)
                .map(|k| (0..=m).map(|i| response[m - i][k] * forcing[i][k]).sum())
                .collect();
            spectra.push(next);
        }
        Self { dt, spectra }
    }

    /// `E[(u(t_M, x) - 1)²]`.
    pub fn point_variance(&self, step: usize) -> f64 {
        self.spectra[step].iter().sum()
    }

    /// `Var Σ_x weight(x)(u(t_M, x) - 1) dx^d` for a stencil on the same grid.
    pub fn average_variance(&self, step: usize, stencil_transform: &[f64]) -> f64 {
        self.spectra[step].iter().zip(stencil_transform).map(|(s, h)| s * h).sum()
    }
}

/// `|Σ_x weight(x) e^{2πi k·x/N}|²` for every mode `k`.
pub fn stencil_energy(weights: &SpectralWeights, stencil: &AverageStencil<f64>) -> Vec<f64> {
    let grid = weights.grid;
    let fft = FftNd::<f64>::new(grid.dim, grid.n);
    let mut field: Vec<Complex<f64>> = stencil
        .dense_weights(grid.len())
        .into_iter()
        .map(|v| Complex::new(v, 0.0))
        .collect();
    fft.inverse(&mut field);
    field.iter().map(|z| z.norm_sqr()).collect()
}

fn physical(fft: &FftNd<f64>, spectrum: &[f64]) -> Vec<Complex<f64>> {
    let mut f: Vec<Complex<f64>> = spectrum.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft.inverse(&mut f);
    f
}

/// `(S ⊛ w)_k = Σ_j S_j w_{k-j}` over the periodic mode lattice.
fn circular_convolution(fft: &FftNd<f64>, s: &[f64], w_phys: &[Complex<f64>]) -> Vec<f64> {
    let mut f = physical(fft, s);
    for (a, b) in f.iter_mut().zip(w_phys) {
        *a *= *b;
    }
    fft.forward(&mut f);
    let norm = 1.0 / s.len() as f64;
    f.iter().map(|z| z.re * norm).collect()
}

/// `E|u_n(t_M, x) - U(t_M, x)|²` for `σ ≡ c` and the mollifier factors `f_k` of level `n`:
/// `c² Σ_k dt w_k (1 - f_k)² Σ_{j<M} M_k(j dt)²`.
pub fn constant_sigma_mollifier_gap(weights: &SpectralWeights, c: f64, dt: f64, steps: usize, factors: &[f64]) -> f64 {
    let grid = weights.grid;
    let dxi = grid.dxi();
    grid.norm2_table()
        .iter()
        .zip(weights.values())
        .zip(factors)
        .map(|((&k2, &wk), &f)| {
            let r = (k2 as f64).sqrt() * dxi;
            let response: f64 = (0..steps).map(|j| wave_multiplier(j as f64 * dt, r).powi(2)).sum();
            c * c * dt * wk * (1.0 - f) * (1.0 - f) * response
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::RieszKernel;
    use crate::noise::{TorusGrid, ZeroMode};
    use crate::solver::AverageWeight;

    fn weights() -> SpectralWeights {
        SpectralWeights::build(
            TorusGrid::new(1, 16, 4.0).unwrap(),
            RieszKernel::new(1, 0.5).unwrap(),
            ZeroMode::TorusMean,
        )
        .unwrap()
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let w = weights();
        let fft = FftNd::<f64>::new(1, 16);
        let s: Vec<f64> = (0..16).map(|k| 1.0 + (k as f64 * 0.7).sin().abs()).collect();
        let got = circular_convolution(&fft, &s, &physical(&fft, w.values()));
        for k in 0..16 {
            let want: f64 = (0..16).map(|j| s[j] * w.values()[(k + 16 - j) % 16]).sum();
            assert!((got[k] - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn stencil_energy_matches_explicit_transform() {
        let w = weights();
        let stencil = AverageStencil::<f64>::new(&w.grid, 1.5, AverageWeight::Indicator);
        let energy = stencil_energy(&w, &stencil);
        let g = w.grid;
        let dx = g.dx();
        for k in 0..16 {
            let mut z = Complex::new(0.0, 0.0);
            for j in 0..16 {
                let x = g.signed(j) as f64 * dx;
                if x.abs() <= 1.5 + 1e-12 {
                    z += Complex::from_polar(dx, 2.0 * std::f64::consts::PI * (k * j) as f64 / 16.0);
                }
            }
            assert!((energy[k] - z.norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_sigma_has_no_feedback() {
        let w = weights();
        let m = SchemeMoments::compute(&w, Sigma::Constant { value: 1.0 }, 0.125, 8);
        // One step: the kick sits in the velocity, u unchanged.
        assert_eq!(m.point_variance(1), 0.0);
        let exact: f64 = w
            .grid
            .norm2_table()
            .iter()
            .zip(w.values())
            .map(|(&k2, wk)| 0.125 * wk * wave_multiplier(0.125, (k2 as f64).sqrt() * w.grid.dxi()).powi(2))
            .sum();
        assert!((m.point_variance(2) - exact).abs() < 1e-15);
    }
}
