use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kernels::riesz::MAX_DIM;

/// Periodic grid on `[-L, L)^d` with `N` points per axis, stored row-major.
///
/// Index `j` along an axis stands for the signed integer `j` if `j < N/2`, else `j - N`. The same
/// integer gives the position `j·dx` and the wavenumber `j / (2L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusGrid {
    pub dim: usize,
    pub n: usize,
    pub half_period: f64,
}

impl TorusGrid {
    pub fn new(dim: usize, n: usize, half_period: f64) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(invalid("dim", format!("dimension {dim} is outside 1..={MAX_DIM}")));
        }
        if n < 2 || !n.is_multiple_of(2) {
            return Err(invalid("n", format!("modes per axis must be even and >= 2, got {n}")));
        }
        if !(half_period > 0.0 && half_period.is_finite()) {
            return Err(invalid("half_period", format!("must be positive, got {half_period}")));
        }
        Ok(Self { dim, n, half_period })
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_period / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Spacing of the wavenumber lattice, `1 / (2L)`.
    pub fn dxi(&self) -> f64 {
        0.5 / self.half_period
    }

    #[inline]
    pub fn signed(&self, j: usize) -> i64 {
        if j < self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Signed lattice coordinates of a flat index.
    pub fn coords(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0; self.dim];
        for slot in out.iter_mut().rev() {
            *slot = self.signed(idx % self.n);
            idx /= self.n;
        }
        out
    }

    /// Squared integer norm of every index; `|ξ_k| = sqrt(K²)/(2L)` and `|x_j| = sqrt(J²)·dx`.
    pub fn norm2_table(&self) -> Vec<u64> {
        (0..self.len())
            .map(|idx| self.coords(idx).iter().map(|c| (c * c) as u64).sum())
            .collect()
    }

    /// Flat index of `-k` for every `k`.
    pub fn partner_table(&self) -> Vec<usize> {
        let n = self.n;
        (0..self.len())
            .map(|mut idx| {
                let mut out = 0;
                let mut stride = 1;
                for _ in 0..self.dim {
                    let j = idx % n;
                    out += ((n - j) % n) * stride;
                    idx /= n;
                    stride *= n;
                }
                out
            })
            .collect()
    }

    /// Flat index of the cell displaced by `shift` (in cells, wrapping).
    pub fn shifted(&self, idx: usize, shift: &[i64]) -> usize {
        let n = self.n as i64;
        let mut rem = idx;
        let mut out = 0usize;
        let mut stride = 1usize;
        for axis in (0..self.dim).rev() {
            let j = (rem % self.n) as i64;
            rem /= self.n;
            let moved = (j + shift[axis]).rem_euclid(n) as usize;
            out += moved * stride;
            stride *= self.n;
        }
        out
    }

    /// Light-cone rule `L >= R_max + T + 2`.
    pub fn check_wraparound(&self, r_max: f64, horizon: f64) -> Result<()> {
        let required = r_max + horizon + 2.0;
        if self.half_period < required {
            return Err(Error::Wraparound {
                half_period: self.half_period,
                required,
            });
        }
        Ok(())
    }
}
