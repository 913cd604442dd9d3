//! Separable multi-dimensional complex FFT on row-major periodic grids.
//!
//! Both directions are unnormalized: `inverse(forward(x)) == N^d * x`.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::Scalar;

pub struct FftNd<S: Scalar> {
    dim: usize,
    n: usize,
    forward: Arc<dyn Fft<S>>,
    inverse: Arc<dyn Fft<S>>,
}

impl<S: Scalar> FftNd<S> {
    pub fn new(dim: usize, n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            dim,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn forward(&self, data: &mut [Complex<S>]) {
        self.apply(&*self.forward, data);
    }

    pub fn inverse(&self, data: &mut [Complex<S>]) {
        self.apply(&*self.inverse, data);
    }

    fn apply(&self, plan: &dyn Fft<S>, data: &mut [Complex<S>]) {
        assert_eq!(data.len(), self.len(), "field length does not match the grid");
        let n = self.n;
        if self.dim == 1 {
            plan.process(data);
            return;
        }
        let mut line = vec![Complex::new(S::zero(), S::zero()); n];
        let total = data.len();
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = stride * n;
            for start in (0..total).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (i, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + i * stride];
                    }
                    plan.process(&mut line);
                    for (i, value) in line.iter().enumerate() {
                        data[base + i * stride] = *value;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(dim: usize, n: usize, data: &[Complex<f64>]) -> Vec<Complex<f64>> {
        let total = n.pow(dim as u32);
        let digits = |mut idx: usize| {
            let mut out = vec![0usize; dim];
            for a in (0..dim).rev() {
                out[a] = idx % n;
                idx /= n;
            }
            out
        };
        (0..total)
            .map(|k| {
                let kk = digits(k);
                data.iter().enumerate().fold(Complex::new(0.0, 0.0), |acc, (j, v)| {
                    let jj = digits(j);
                    let phase: f64 = kk.iter().zip(&jj).map(|(a, b)| (a * b) as f64).sum::<f64>()
                        * -2.0
                        * std::f64::consts::PI
                        / n as f64;
                    acc + v * Complex::from_polar(1.0, phase)
                })
            })
            .collect()
    }

    #[test]
    fn matches_naive_transform_in_two_dimensions() {
        let (dim, n) = (2, 6);
        let data: Vec<Complex<f64>> = (0..36)
            .map(|i| Complex::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut fast = data.clone();
        FftNd::new(dim, n).forward(&mut fast);
        let slow = naive_dft(dim, n, &data);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn inverse_undoes_forward_up_to_volume() {
        let fft = FftNd::<f64>::new(3, 4);
        let data: Vec<Complex<f64>> = (0..64).map(|i| Complex::new(i as f64, -(i as f64) / 3.0)).collect();
        let mut work = data.clone();
        fft.forward(&mut work);
        fft.inverse(&mut work);
        for (a, b) in work.iter().zip(&data) {
            assert!((a / 64.0 - b).norm() < 1e-10);
        }
    }
}
