//! Brute-force oracle: dense-covariance noise and a leapfrog finite-difference stepper,
//! with no Fourier transforms on the solution path.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::noise::{SpectralWeights, TorusGrid};
use crate::rng::{stream, Domain};
use crate::solver::Sigma;

const FROBENIUS_LIMIT: f64 = 1e-6;
const EIGEN_FLOOR: f64 = 1e-8;

/// Noise increments `ΔW = A z` with `A Aᵀ = Γ`, `Γ_ij = dt Σ_k w_k cos(2πξ_k·(x_i - x_j))`.
#[derive(Debug, Clone)]
pub struct DenseSimulator {
    pub grid: TorusGrid,
    pub dt: f64,
    gamma: DMatrix<f64>,
    factor: DMatrix<f64>,
    /// Frobenius norm of the eigenvalue clipping, relative to `‖Γ‖`; 0 when Cholesky succeeded.
    pub clipping: f64,
}

/// Fields at the record steps.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePath {
    pub fields: Vec<Vec<f64>>,
}

pub fn check_cfl(grid: &TorusGrid, dt: f64) -> Result<()> {
    let limit = grid.dx() / (grid.dim as f64).sqrt();
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, limit });
    }
    Ok(())
}

impl DenseSimulator {
    pub fn new(weights: &SpectralWeights, dt: f64) -> Result<Self> {
        let grid = weights.grid;
        let cap = match grid.dim {
            1 => 32,
            2 => 16,
            _ => return Err(invalid("dim", "the dense oracle supports d = 1 and d = 2 only")),
        };
        if grid.n > cap {
            return Err(invalid("n", format!("dense oracle grids are limited to N <= {cap} in d = {}", grid.dim)));
        }
        check_cfl(&grid, dt)?;
        let len = grid.len();
        // Covariance depends only on the displacement; tabulate it by flat displacement index.
        let by_shift: Vec<f64> = (0..len).map(|idx| weights.covariance(dt, &grid.coords(idx))).collect();
        let gamma = DMatrix::from_fn(len, len, |i, j| {
            let shift: Vec<i64> = grid.coords(j).iter().zip(grid.coords(i)).map(|(a, b)| a - b).collect();
            by_shift[grid.shifted(0, &shift)]
        });
        let (factor, clipping) = match gamma.clone().cholesky() {
            Some(ch) => (ch.l(), 0.0),
            None => clipped_root(&gamma)?,
        };
        Ok(Self {
            grid,
            dt,
            gamma,
            factor,
            clipping,
        })
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn sample_increment<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let z = DVector::from_fn(self.grid.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
        &self.factor * z
    }

    /// Leapfrog path `u^{m+1} = 2u^m - u^{m-1} + dt² Δ_h u^m + dt σ(u^m) ΔW^m` from `u ≡ 1`
    /// with the zero-velocity Taylor start.
    pub fn sample_path(&self, sigma: Sigma, record_steps: &[usize], seed: u64, replicate: u64) -> DensePath {
        let len = self.grid.len();
        let dt = self.dt;
        let last = record_steps.last().copied().unwrap_or(0);
        let mut fields = Vec::with_capacity(record_steps.len());
        let mut prev = vec![1.0; len];
        let mut lap = vec![0.0; len];
        let mut j = 0;
        let mut record = |step: usize, u: &[f64], fields: &mut Vec<Vec<f64>>| {
            while j < record_steps.len() && record_steps[j] == step {
                fields.push(u.to_vec());
                j += 1;
            }
        };
        record(0, &prev, &mut fields);
        if last == 0 {
            return DensePath { fields };
        }
        let noise = |m: usize| self.sample_increment(&mut stream(seed, Domain::DenseNoise, replicate, m as u64));
        laplacian(&self.grid, &prev, &mut lap);
        let dw = noise(0);
        let mut cur: Vec<f64> = (0..len)
            .map(|i| prev[i] + 0.5 * dt * dt * lap[i] + dt * sigma.eval(prev[i]) * dw[i])
            .collect();
        record(1, &cur, &mut fields);
        for m in 1..last {
            laplacian(&self.grid, &cur, &mut lap);
            let dw = noise(m);
            let next: Vec<f64> = (0..len)
                .map(|i| 2.0 * cur[i] - prev[i] + dt * dt * lap[i] + dt * sigma.eval(cur[i]) * dw[i])
                .collect();
            prev = std::mem::replace(&mut cur, next);
            record(m + 1, &cur, &mut fields);
        }
        DensePath { fields }
    }
}

/// `A = V sqrt(max(Λ, 0))` for a nearly positive semidefinite `Γ`.
fn clipped_root(gamma: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let n = gamma.nrows();
    let eig = SymmetricEigen::new(gamma.clone());
    let trace = gamma.trace();
    let smallest = eig.eigenvalues.min();
    if smallest < -EIGEN_FLOOR * trace / n as f64 {
        return Err(Error::NotPsd(format!("smallest eigenvalue {smallest:e} below tolerance")));
    }
    let clipped = eig.eigenvalues.map(|l| l.max(0.0));
    let change = eig.eigenvalues.iter().zip(clipped.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let relative = change / gamma.norm();
    if relative >= FROBENIUS_LIMIT {
        return Err(Error::NotPsd(format!("clipping changes the matrix by {relative:e} relative")));
    }
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&clipped.map(f64::sqrt));
    Ok((root, relative))
}

/// Periodic `(2d+1)`-point Laplacian.
pub fn laplacian(grid: &TorusGrid, u: &[f64], out: &mut [f64]) {
    let inv = 1.0 / (grid.dx() * grid.dx());
    let mut shift = vec![0i64; grid.dim];
    for (idx, o) in out.iter_mut().enumerate() {
        let mut acc = -2.0 * grid.dim as f64 * u[idx];
        for axis in 0..grid.dim {
            for step in [-1, 1] {
                shift[axis] = step;
                acc += u[grid.shifted(idx, &shift)];
            }
            shift[axis] = 0;
        }
        *o = acc * inv;
    }
}

/// Deterministic leapfrog from displacement `u0` at rest, `steps` steps of size `dt`.
pub fn leapfrog_free(grid: &TorusGrid, dt: f64, u0: &[f64], steps: usize) -> Result<Vec<f64>> {
    check_cfl(grid, dt)?;
    let mut lap = vec![0.0; u0.len()];
    laplacian(grid, u0, &mut lap);
    let mut prev = u0.to_vec();
    if steps == 0 {
        return Ok(prev);
    }
    let mut cur: Vec<f64> = prev.iter().zip(&lap).map(|(u, l)| u + 0.5 * dt * dt * l).collect();
    for _ in 1..steps {
        laplacian(grid, &cur, &mut lap);
        let next: Vec<f64> = (0..cur.len()).map(|i| 2.0 * cur[i] - prev[i] + dt * dt * lap[i]).collect();
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}
