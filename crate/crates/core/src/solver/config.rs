use serde::{Deserialize, Serialize};

use super::sigma::Sigma;
use crate::error::{invalid, Error, Result};
use crate::noise::TorusGrid;

/// Default cap on the state kept by Picard runs: 1 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

const GRID_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverMode {
    /// The unmollified solution.
    Direct,
    /// Iterates `u_0, ..., u_nmax` alongside the direct solution, all driven by one noise path.
    Picard { nmax: u32 },
    /// The solution with wave kernel `G * Λ_n`.
    Mollified { n: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid: TorusGrid,
    pub dt: f64,
    pub horizon: f64,
    pub sigma: Sigma,
    pub mode: SolverMode,
    pub record_times: Vec<f64>,
    /// Averaging radii for `F_R`.
    pub radii: Vec<f64>,
    /// Also record the `ψ_R`-weighted averages.
    #[serde(default)]
    pub smoothed: bool,
    /// Keep physical fields at record times for replicate 0.
    #[serde(default)]
    pub snapshots: bool,
    #[serde(default = "default_budget")]
    pub memory_budget: u64,
}

fn default_budget() -> u64 {
    DEFAULT_MEMORY_BUDGET
}

impl SolverConfig {
    /// Direct-mode configuration with no snapshots and the default memory budget.
    pub fn direct(grid: TorusGrid, dt: f64, horizon: f64, sigma: Sigma, record_times: Vec<f64>, radii: Vec<f64>) -> Self {
        Self {
            grid,
            dt,
            horizon,
            sigma,
            mode: SolverMode::Direct,
            record_times,
            radii,
            smoothed: false,
            snapshots: false,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }

    pub fn total_steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    /// Step index of every record time.
    pub fn record_steps(&self) -> Vec<usize> {
        self.record_times.iter().map(|t| (t / self.dt).round() as usize).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        TorusGrid::new(g.dim, g.n, g.half_period)?;
        if g.dim == 4 && g.n > 16 {
            return Err(invalid("n", "d = 4 runs are limited to N <= 16 per axis"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(invalid("horizon", format!("must be non-negative, got {}", self.horizon)));
        }
        on_step_grid(self.horizon, self.dt, "horizon")?;
        if self.record_times.is_empty() {
            return Err(invalid("record_times", "at least one record time is required"));
        }
        if self.record_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("record_times", "must be strictly increasing"));
        }
        for &t in &self.record_times {
            if !(0.0..=self.horizon * (1.0 + GRID_TOLERANCE)).contains(&t) {
                return Err(invalid("record_times", format!("{t} is outside [0, {}]", self.horizon)));
            }
            on_step_grid(t, self.dt, "record_times")?;
        }
        if self.radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(invalid("radii", "radii must be positive"));
        }
        let r_max = self.radii.iter().cloned().fold(0.0, f64::max);
        g.check_wraparound(r_max, self.horizon)?;
        match self.mode {
            SolverMode::Picard { nmax: 0 } => return Err(invalid("nmax", "Picard runs need nmax >= 1")),
            SolverMode::Mollified { n: 0 } => return Err(invalid("n", "mollifier index starts at 1")),
            _ => {}
        }
        Ok(())
    }

    /// Bytes held by the field states of one replicate at precision `bytes_per_real`.
    pub fn state_bytes(&self, bytes_per_real: u64) -> u64 {
        let levels = match self.mode {
            SolverMode::Picard { nmax } => nmax as u64 + 1,
            _ => 1,
        };
        levels * 2 * 2 * bytes_per_real * self.grid.len() as u64
    }

    pub fn check_memory(&self, bytes_per_real: u64) -> Result<()> {
        let requested = self.state_bytes(bytes_per_real);
        if requested > self.memory_budget {
            return Err(Error::MemoryBudget {
                requested,
                budget: self.memory_budget,
            });
        }
        Ok(())
    }
}

fn on_step_grid(t: f64, dt: f64, name: &'static str) -> Result<()> {
    let steps = t / dt;
    if (steps - steps.round()).abs() > GRID_TOLERANCE * steps.max(1.0) {
        return Err(invalid(name, format!("{t} is not a multiple of dt = {dt}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SolverConfig {
        SolverConfig::direct(
            TorusGrid::new(1, 64, 8.0).unwrap(),
            0.125,
            1.0,
            Sigma::Constant { value: 1.0 },
            vec![0.0, 0.5, 1.0],
            vec![2.0, 4.0],
        )
    }

    #[test]
    fn accepts_valid_config() {
        base().validate().unwrap();
        assert_eq!(base().record_steps(), vec![0, 4, 8]);
        assert_eq!(base().total_steps(), 8);
    }

    #[test]
    fn rejects_off_grid_record_times() {
        let mut c = base();
        c.record_times = vec![0.0, 0.3];
        assert!(c.validate().is_err());
    }

    #[test]
    fn rejects_large_radius() {
        let mut c = base();
        c.radii = vec![5.5];
        assert!(matches!(c.validate(), Err(Error::Wraparound { .. })));
    }

    #[test]
    fn memory_guard() {
        let mut c = base();
        c.mode = SolverMode::Picard { nmax: 6 };
        assert_eq!(c.state_bytes(8), 7 * 4 * 8 * 64);
        c.memory_budget = 1000;
        assert!(matches!(c.check_memory(8), Err(Error::MemoryBudget { .. })));
    }
}
