use std::f64::consts::PI;

use num_complex::Complex;

use crate::fft::FftNd;
use crate::kernels::wave_multiplier;
use crate::noise::TorusGrid;
use crate::scalar::Scalar;

/// Position and velocity transforms, `u_j = Σ_k û_k e^{2πi k·j/N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<S: Scalar> {
    pub uhat: Vec<Complex<S>>,
    pub phat: Vec<Complex<S>>,
    pub t: f64,
}

impl<S: Scalar> FieldState<S> {
    /// `u ≡ 1`, `∂_t u ≡ 0`.
    pub fn initial(len: usize) -> Self {
        let mut uhat = vec![Complex::new(S::zero(), S::zero()); len];
        uhat[0] = Complex::new(S::one(), S::zero());
        Self {
            uhat,
            phat: vec![Complex::new(S::zero(), S::zero()); len],
            t: 0.0,
        }
    }

    /// Physical position field written into `out` (real parts).
    pub fn position(&self, fft: &FftNd<S>, scratch: &mut [Complex<S>], out: &mut [S]) {
        scratch.copy_from_slice(&self.uhat);
        fft.inverse(scratch);
        for (o, z) in out.iter_mut().zip(scratch.iter()) {
            *o = z.re;
        }
    }

    /// `u` at the origin, `Re Σ_k û_k`.
    pub fn center(&self) -> S {
        self.uhat.iter().fold(S::zero(), |acc, z| acc + z.re)
    }
}

/// Exact free-wave flow over a fixed time `h`, per mode.
#[derive(Debug, Clone)]
pub struct Propagator<S: Scalar> {
    pub h: f64,
    cos: Vec<S>,
    /// `sin(ωh)/ω`.
    mult: Vec<S>,
    /// `-ω sin(ωh)`.
    neg_omega_sin: Vec<S>,
}

impl<S: Scalar> Propagator<S> {
    pub fn new(grid: &TorusGrid, h: f64) -> Self {
        let norms = grid.norm2_table();
        let dxi = grid.dxi();
        let mut cos = Vec::with_capacity(norms.len());
        let mut mult = Vec::with_capacity(norms.len());
        let mut neg = Vec::with_capacity(norms.len());
        for k2 in norms {
            let r = (k2 as f64).sqrt() * dxi;
            let omega = 2.0 * PI * r;
            cos.push(S::of((omega * h).cos()));
            mult.push(S::of(wave_multiplier(h, r)));
            neg.push(S::of(-omega * (omega * h).sin()));
        }
        Self {
            h,
            cos,
            mult,
            neg_omega_sin: neg,
        }
    }

    pub fn apply(&self, state: &mut FieldState<S>) {
        for k in 0..state.uhat.len() {
            let (u, p) = (state.uhat[k], state.phat[k]);
            state.uhat[k] = u * self.cos[k] + p * self.mult[k];
            state.phat[k] = u * self.neg_omega_sin[k] + p * self.cos[k];
        }
        state.t += self.h;
    }
}

/// Free propagation by `h` (builds the per-mode coefficients on the fly).
pub fn propagate_free<S: Scalar>(state: &mut FieldState<S>, grid: &TorusGrid, h: f64) {
    Propagator::new(grid, h).apply(state);
}

/// `p̂ += F[σ ⊙ dW]`, with `F` the normalized forward transform.
pub fn kick<S: Scalar>(state: &mut FieldState<S>, sigma_field: &[S], dw: &[S], fft: &FftNd<S>, scratch: &mut [Complex<S>]) {
    for ((z, s), w) in scratch.iter_mut().zip(sigma_field).zip(dw) {
        *z = Complex::new(*s * *w, S::zero());
    }
    fft.forward(scratch);
    let norm = S::one() / S::of(scratch.len() as f64);
    for (p, z) in state.phat.iter_mut().zip(scratch.iter()) {
        *p = *p + *z * norm;
    }
}
