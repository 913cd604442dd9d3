use std::collections::HashMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::average::{AverageStencil, AverageWeight};
use super::config::{SolverConfig, SolverMode};
use super::state::{FieldState, Propagator};
use crate::error::{invalid, Result};
use crate::fft::FftNd;
use crate::kernels::MollifierFamily;
use crate::noise::{hermitian_gaussian, SpectralWeights};
use crate::rng::{stream, Domain};
use crate::scalar::Scalar;

/// `F_R(t_j)` for one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageObservation {
    pub radius: f64,
    pub values: Vec<f64>,
    pub smoothed: Option<Vec<f64>>,
}

/// Everything one replicate reports at the record times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathObservation {
    pub averages: Vec<AverageObservation>,
    /// `u(t_j, 0)`.
    pub center_u: Vec<f64>,
    /// `σ(u(t_j, 0))`.
    pub center_sigma: Vec<f64>,
    /// Physical fields at the record times, when requested.
    pub snapshots: Option<Vec<Vec<f64>>>,
}

/// One Picard iterate along the shared noise path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelObservation {
    pub n: u32,
    /// `F_{n,R}(t_j)`, indexed `[radius][time]`.
    pub averages: Vec<Vec<f64>>,
    /// `u_n(t_j, 0)`.
    pub center: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardObservation {
    pub direct: PathObservation,
    /// Levels `0..=nmax`.
    pub levels: Vec<LevelObservation>,
}

struct Workspace<S: Scalar> {
    noise: Vec<Complex<S>>,
    dw: Vec<S>,
    field: Vec<S>,
    scratch: Vec<Complex<S>>,
    kick: Vec<Complex<S>>,
}

impl<S: Scalar> Workspace<S> {
    fn new(len: usize) -> Self {
        let zero = Complex::new(S::zero(), S::zero());
        Self {
            noise: vec![zero; len],
            dw: vec![S::zero(); len],
            field: vec![S::zero(); len],
            scratch: vec![zero; len],
            kick: vec![zero; len],
        }
    }
}

/// Spectral solver for one configuration; cheap to share across replicate threads.
pub struct Solver<S: Scalar> {
    cfg: SolverConfig,
    fft: FftNd<S>,
    prop: Propagator<S>,
    amp: Vec<S>,
    partner: Vec<usize>,
    record_steps: Vec<usize>,
    indicator: Vec<AverageStencil<S>>,
    psi: Vec<AverageStencil<S>>,
    /// `FΛ_n(ξ_k)` for `n = 1..`; one entry in mollified mode.
    factors: Vec<Vec<S>>,
    seed: u64,
}

impl<S: Scalar> Solver<S> {
    pub fn new(cfg: SolverConfig, weights: &SpectralWeights, seed: u64) -> Result<Self> {
        cfg.validate()?;
        if weights.grid != cfg.grid {
            return Err(invalid("grid", "noise weights were built for a different grid"));
        }
        cfg.check_memory(std::mem::size_of::<S>() as u64)?;
        let grid = cfg.grid;
        let levels: Vec<u32> = match cfg.mode {
            SolverMode::Direct => vec![],
            SolverMode::Picard { nmax } => (1..=nmax).collect(),
            SolverMode::Mollified { n } => vec![n],
        };
        let factors = if levels.is_empty() {
            vec![]
        } else {
            let family = MollifierFamily::new(grid.dim)?;
            let norms = grid.norm2_table();
            let dxi = grid.dxi();
            levels
                .iter()
                .map(|&n| {
                    let mut cache: HashMap<u64, S> = HashMap::new();
                    norms
                        .iter()
                        .map(|&k2| *cache.entry(k2).or_insert_with(|| S::of(family.transform(n, (k2 as f64).sqrt() * dxi))))
                        .collect()
                })
                .collect()
        };
        let indicator = cfg.radii.iter().map(|&r| AverageStencil::new(&grid, r, AverageWeight::Indicator)).collect();
        let psi = if cfg.smoothed {
            cfg.radii.iter().map(|&r| AverageStencil::new(&grid, r, AverageWeight::Psi)).collect()
        } else {
            vec![]
        };
        Ok(Self {
            fft: FftNd::new(grid.dim, grid.n),
            prop: Propagator::new(&grid, cfg.dt),
            amp: weights.amplitudes(cfg.dt),
            partner: grid.partner_table(),
            record_steps: cfg.record_steps(),
            indicator,
            psi,
            factors,
            seed,
            cfg,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Mollifier factors `FΛ_n(ξ_k)` used at level `n` (Picard) or by the mollified kernel.
    pub fn level_factors(&self, n: u32) -> Option<&[S]> {
        match self.cfg.mode {
            SolverMode::Picard { nmax } if (1..=nmax).contains(&n) => Some(&self.factors[n as usize - 1]),
            SolverMode::Mollified { n: m } if m == n => Some(&self.factors[0]),
            _ => None,
        }
    }

    fn draw_noise(&self, replicate: u64, step: usize, ws: &mut Workspace<S>) {
        let mut rng = stream(self.seed, Domain::Noise, replicate, step as u64);
        hermitian_gaussian(&self.amp, &self.partner, &mut rng, &mut ws.noise);
    }

    /// Physical `dW` from the spectral coefficients in `ws.noise`.
    fn physical_noise(&self, ws: &mut Workspace<S>) {
        ws.scratch.copy_from_slice(&ws.noise);
        self.fft.inverse(&mut ws.scratch);
        for (d, z) in ws.dw.iter_mut().zip(&ws.scratch) {
            *d = z.re;
        }
    }

    /// Writes `F[σ(u) dW]` for the pre-step state `source` into `ws.kick`.
    /// `source = None` stands for `u ≡ 1`.
    fn integrand(&self, source: Option<&FieldState<S>>, ws: &mut Workspace<S>) {
        let sigma = self.cfg.sigma;
        let constant = match source {
            None => Some(sigma.eval(S::one())),
            Some(_) => sigma.constant_value().map(S::of),
        };
        if let Some(c) = constant {
            for (k, a) in ws.kick.iter_mut().zip(&ws.noise) {
                *k = *a * c;
            }
            return;
        }
        let state = source.expect("non-constant integrand needs a state");
        state.position(&self.fft, &mut ws.scratch, &mut ws.field);
        for ((z, u), w) in ws.kick.iter_mut().zip(&ws.field).zip(&ws.dw) {
            *z = Complex::new(sigma.eval(*u) * *w, S::zero());
        }
        self.fft.forward(&mut ws.kick);
        let norm = S::one() / S::of(ws.kick.len() as f64);
        for z in ws.kick.iter_mut() {
            *z = *z * norm;
        }
    }

    fn advance(&self, state: &mut FieldState<S>, kick: &[Complex<S>], factor: Option<&[S]>) {
        self.prop.apply(state);
        match factor {
            None => {
                for (p, k) in state.phat.iter_mut().zip(kick) {
                    *p = *p + *k;
                }
            }
            Some(f) => {
                for ((p, k), m) in state.phat.iter_mut().zip(kick).zip(f) {
                    *p = *p + *k * *m;
                }
            }
        }
    }

    fn needs_physical_noise(&self) -> bool {
        self.cfg.sigma.constant_value().is_none()
    }

    /// One step of the direct (or mollified) scheme: propagate by `dt`, then kick with
    /// `σ(u(t_m)) ΔW^m`, the integrand taken before propagation.
    pub fn step(&self, state: &mut FieldState<S>, replicate: u64, step: usize) {
        let mut ws = Workspace::new(state.uhat.len());
        self.step_with(state, replicate, step, &mut ws);
    }

    fn step_with(&self, state: &mut FieldState<S>, replicate: u64, step: usize, ws: &mut Workspace<S>) {
        self.draw_noise(replicate, step, ws);
        if self.needs_physical_noise() {
            self.physical_noise(ws);
        }
        self.integrand(Some(state), ws);
        let factor = match self.cfg.mode {
            SolverMode::Mollified { .. } => Some(self.factors[0].as_slice()),
            _ => None,
        };
        let kick = std::mem::take(&mut ws.kick);
        self.advance(state, &kick, factor);
        ws.kick = kick;
    }

    fn record(&self, state: &FieldState<S>, obs: &mut PathObservation, ws: &mut Workspace<S>, j: usize) {
        state.position(&self.fft, &mut ws.scratch, &mut ws.field);
        let center = ws.field[0];
        obs.center_u[j] = center.as_f64();
        obs.center_sigma[j] = self.cfg.sigma.eval(center).as_f64();
        for (r, stencil) in self.indicator.iter().enumerate() {
            obs.averages[r].values[j] = stencil.apply(&ws.field);
        }
        for (r, stencil) in self.psi.iter().enumerate() {
            if let Some(s) = obs.averages[r].smoothed.as_mut() {
                s[j] = stencil.apply(&ws.field);
            }
        }
        if let Some(snaps) = obs.snapshots.as_mut() {
            snaps.push(ws.field.iter().map(|v| v.as_f64()).collect());
        }
    }

    fn empty_observation(&self, snapshots: bool) -> PathObservation {
        let times = self.record_steps.len();
        PathObservation {
            averages: self
                .cfg
                .radii
                .iter()
                .map(|&radius| AverageObservation {
                    radius,
                    values: vec![0.0; times],
                    smoothed: self.cfg.smoothed.then(|| vec![0.0; times]),
                })
                .collect(),
            center_u: vec![0.0; times],
            center_sigma: vec![0.0; times],
            snapshots: snapshots.then(Vec::new),
        }
    }

    /// Runs one replicate to the last record time.
    pub fn solve_path(&self, replicate: u64) -> PathObservation {
        let len = self.cfg.grid.len();
        let mut ws = Workspace::new(len);
        let mut state = FieldState::initial(len);
        let mut obs = self.empty_observation(self.cfg.snapshots && replicate == 0);
        let last = *self.record_steps.last().expect("validated non-empty");
        let mut j = 0;
        for step in 0..=last {
            while j < self.record_steps.len() && self.record_steps[j] == step {
                self.record(&state, &mut obs, &mut ws, j);
                j += 1;
            }
            if step < last {
                self.step_with(&mut state, replicate, step, &mut ws);
            }
        }
        obs
    }

    /// Direct solution and Picard iterates `u_1..u_nmax` on one noise path. Level `n` is
    /// driven by `σ(u_{n-1}(t_m)) ΔW^m` through the kernel `G * Λ_n`, with `u_0 ≡ 1`.
    pub fn picard_path(&self, replicate: u64) -> Result<PicardObservation> {
        let nmax = match self.cfg.mode {
            SolverMode::Picard { nmax } => nmax as usize,
            _ => return Err(invalid("mode", "picard_path needs a Picard configuration")),
        };
        let len = self.cfg.grid.len();
        let times = self.record_steps.len();
        let radii = self.cfg.radii.len();
        let mut ws = Workspace::new(len);
        let mut direct = FieldState::initial(len);
        let mut levels: Vec<FieldState<S>> = (0..nmax).map(|_| FieldState::initial(len)).collect();
        let mut obs = self.empty_observation(self.cfg.snapshots && replicate == 0);
        let mut level_obs: Vec<LevelObservation> = (0..=nmax)
            .map(|n| LevelObservation {
                n: n as u32,
                averages: vec![vec![0.0; times]; radii],
                center: vec![1.0; times],
            })
            .collect();
        let last = *self.record_steps.last().expect("validated non-empty");
        let mut j = 0;
        for step in 0..=last {
            while j < times && self.record_steps[j] == step {
                self.record(&direct, &mut obs, &mut ws, j);
                for (n, state) in levels.iter().enumerate() {
                    state.position(&self.fft, &mut ws.scratch, &mut ws.field);
                    let lo = &mut level_obs[n + 1];
                    lo.center[j] = ws.field[0].as_f64();
                    for (r, stencil) in self.indicator.iter().enumerate() {
                        lo.averages[r][j] = stencil.apply(&ws.field);
                    }
                }
                j += 1;
            }
            if step == last {
                break;
            }
            self.draw_noise(replicate, step, &mut ws);
            if self.needs_physical_noise() {
                self.physical_noise(&mut ws);
            }
            self.integrand(Some(&direct), &mut ws);
            let kick = std::mem::take(&mut ws.kick);
            self.advance(&mut direct, &kick, None);
            ws.kick = kick;
            // Top level first, so each level reads its predecessor before that one moves.
            for n in (1..=nmax).rev() {
                let (lower, upper) = levels.split_at_mut(n - 1);
                let source = if n == 1 { None } else { Some(&lower[n - 2]) };
                self.integrand(source, &mut ws);
                let kick = std::mem::take(&mut ws.kick);
                self.advance(&mut upper[0], &kick, Some(&self.factors[n - 1]));
                ws.kick = kick;
            }
        }
        Ok(PicardObservation {
            direct: obs,
            levels: level_obs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::RieszKernel;
    use crate::noise::{TorusGrid, ZeroMode};
    use crate::solver::Sigma;

    fn setup(sigma: Sigma, mode: SolverMode) -> (SolverConfig, SpectralWeights) {
        let grid = TorusGrid::new(1, 64, 8.0).unwrap();
        let weights = SpectralWeights::build(grid, RieszKernel::new(1, 0.5).unwrap(), ZeroMode::TorusMean).unwrap();
        let mut cfg = SolverConfig::direct(grid, 1.0 / 32.0, 1.0, sigma, vec![0.0, 1.0 / 32.0, 0.5, 1.0], vec![2.0, 4.0]);
        cfg.mode = mode;
        cfg.smoothed = true;
        (cfg, weights)
    }

    #[test]
    fn zero_sigma_keeps_unit_field() {
        let (cfg, w) = setup(Sigma::Constant { value: 0.0 }, SolverMode::Direct);
        let obs = Solver::<f64>::new(cfg, &w, 1).unwrap().solve_path(0);
        assert!(obs.center_u.iter().all(|&u| u == 1.0));
        for a in &obs.averages {
            assert!(a.values.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn first_record_and_first_step_are_exactly_one() {
        let (cfg, w) = setup(Sigma::Identity, SolverMode::Direct);
        let obs = Solver::<f64>::new(cfg, &w, 2).unwrap().solve_path(0);
        // The first kick only enters the velocity, so u(dt) ≡ 1.
        assert_eq!(&obs.center_u[..2], &[1.0, 1.0]);
        for a in &obs.averages {
            assert_eq!(a.values[0], 0.0);
            assert_eq!(a.values[1], 0.0);
            assert_eq!(a.smoothed.as_ref().unwrap()[0], 0.0);
        }
        assert_ne!(obs.center_u[3], 1.0);
    }

    #[test]
    fn replicates_are_deterministic_and_distinct() {
        let (cfg, w) = setup(Sigma::Affine { a: 1.0, b: 0.5 }, SolverMode::Direct);
        let s = Solver::<f64>::new(cfg, &w, 3).unwrap();
        assert_eq!(s.solve_path(4), s.solve_path(4));
        assert_ne!(s.solve_path(4), s.solve_path(5));
    }

    #[test]
    fn picard_level_matches_mollified_solution_for_constant_sigma() {
        let sigma = Sigma::Constant { value: 1.3 };
        let (cfg_p, w) = setup(sigma, SolverMode::Picard { nmax: 3 });
        let picard = Solver::<f64>::new(cfg_p, &w, 9).unwrap().picard_path(0).unwrap();
        for n in 1..=3 {
            let (cfg_m, _) = setup(sigma, SolverMode::Mollified { n });
            let moll = Solver::<f64>::new(cfg_m, &w, 9).unwrap().solve_path(0);
            for (a, b) in picard.levels[n as usize].center.iter().zip(&moll.center_u) {
                assert!((a - b).abs() < 1e-13);
            }
        }
        let direct = Solver::<f64>::new(setup(sigma, SolverMode::Direct).0, &w, 9).unwrap().solve_path(0);
        assert_eq!(picard.direct, direct);
        assert!(picard.levels[0].center.iter().all(|&u| u == 1.0));
    }

    #[test]
    fn first_iterate_only_sees_sigma_of_one() {
        let (cfg_a, w) = setup(Sigma::Identity, SolverMode::Picard { nmax: 2 });
        let (cfg_b, _) = setup(Sigma::Constant { value: 1.0 }, SolverMode::Picard { nmax: 2 });
        let a = Solver::<f64>::new(cfg_a, &w, 11).unwrap().picard_path(0).unwrap();
        let b = Solver::<f64>::new(cfg_b, &w, 11).unwrap().picard_path(0).unwrap();
        for (x, y) in a.levels[1].center.iter().zip(&b.levels[1].center) {
            assert!((x - y).abs() < 1e-13);
        }
        // The second iterate feels the nonlinearity.
        assert!(a.levels[2].center.iter().zip(&b.levels[2].center).any(|(x, y)| (x - y).abs() > 1e-6));
    }

    #[test]
    fn single_precision_tracks_double() {
        let (cfg, w) = setup(Sigma::Affine { a: 1.0, b: 0.5 }, SolverMode::Direct);
        let a = Solver::<f64>::new(cfg.clone(), &w, 5).unwrap().solve_path(0);
        let b = Solver::<f32>::new(cfg, &w, 5).unwrap().solve_path(0);
        for (x, y) in a.center_u.iter().zip(&b.center_u) {
            assert!((x - y).abs() < 1e-4, "{x} vs {y}");
        }
    }

    #[test]
    fn snapshots_only_for_first_replicate() {
        let (mut cfg, w) = setup(Sigma::Constant { value: 1.0 }, SolverMode::Direct);
        cfg.snapshots = true;
        let s = Solver::<f64>::new(cfg, &w, 1).unwrap();
        assert_eq!(s.solve_path(0).snapshots.unwrap().len(), 4);
        assert!(s.solve_path(1).snapshots.is_none());
    }

    #[test]
    fn picard_path_requires_picard_mode() {
        let (cfg, w) = setup(Sigma::Identity, SolverMode::Direct);
        assert!(Solver::<f64>::new(cfg, &w, 1).unwrap().picard_path(0).is_err());
    }
}
