use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::noise::TorusGrid;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AverageWeight {
    /// `1_{B_R}`.
    Indicator,
    /// `ψ_R(x) = S(R + 1 - |x|)` with the smoothstep `S(u) = 6u⁵ - 15u⁴ + 10u³` on `[0, 1]`.
    Psi,
}

/// `S(R + 1 - r)` clipped to `[0, 1]`.
pub fn psi_profile(radius: f64, r: f64) -> f64 {
    let u = (radius + 1.0 - r).clamp(0.0, 1.0);
    u * u * u * (10.0 + u * (6.0 * u - 15.0))
}

/// Sparse cell weights (times `dx^d`) of one averaging window.
#[derive(Debug, Clone)]
pub struct AverageStencil<S> {
    pub radius: f64,
    pub weight: AverageWeight,
    cells: Vec<(usize, S)>,
}

impl<S: Scalar> AverageStencil<S> {
    pub fn new(grid: &TorusGrid, radius: f64, weight: AverageWeight) -> Self {
        let dx = grid.dx();
        let vol = grid.cell_volume();
        // Small slack so that radii on the lattice include their boundary cells.
        let reach2 = radius * radius * (1.0 + 1e-12);
        let cells = grid
            .norm2_table()
            .into_iter()
            .enumerate()
            .filter_map(|(idx, j2)| {
                let r2 = j2 as f64 * dx * dx;
                let w = match weight {
                    AverageWeight::Indicator => (r2 <= reach2) as u8 as f64,
                    AverageWeight::Psi => psi_profile(radius, r2.sqrt()),
                };
                (w > 0.0).then(|| (idx, S::of(w * vol)))
            })
            .collect();
        Self { radius, weight, cells }
    }

    /// `Σ_x weight(x) (field(x) - 1) dx^d`, accumulated in `f64`.
    pub fn apply(&self, field: &[S]) -> f64 {
        self.cells
            .iter()
            .map(|&(idx, w)| (w * (field[idx] - S::one())).as_f64())
            .sum()
    }

    /// The weights as a full field over `len` cells.
    pub fn dense_weights(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for &(idx, w) in &self.cells {
            out[idx] = w.as_f64();
        }
        out
    }

    /// Total weight `Σ_x weight(x) dx^d`.
    pub fn mass(&self) -> f64 {
        self.cells.iter().map(|&(_, w)| w.as_f64()).sum()
    }
}

/// Centered average of a physical field, with the radius guard `R + 1 <= L - T - 1`.
pub fn spatial_average<S: Scalar>(grid: &TorusGrid, field: &[S], radius: f64, weight: AverageWeight, horizon: f64) -> Result<f64> {
    if field.len() != grid.len() {
        return Err(invalid("field", "length does not match the grid"));
    }
    grid.check_wraparound(radius, horizon)?;
    Ok(AverageStencil::new(grid, radius, weight).apply(field))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> TorusGrid {
        TorusGrid::new(2, 64, 8.0).unwrap()
    }

    #[test]
    fn unit_field_averages_to_zero() {
        let g = grid();
        let ones = vec![1.0f64; g.len()];
        for w in [AverageWeight::Indicator, AverageWeight::Psi] {
            assert_eq!(spatial_average(&g, &ones, 3.0, w, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn shifted_field_gives_ball_volume() {
        let g = grid();
        let field = vec![1.5f64; g.len()];
        let got = spatial_average(&g, &field, 4.0, AverageWeight::Indicator, 1.0).unwrap();
        let area = std::f64::consts::PI * 16.0;
        assert!((got / (0.5 * area) - 1.0).abs() < 0.03);
    }

    #[test]
    fn psi_sandwich_and_gap_bound() {
        let g = grid();
        let ind = AverageStencil::<f64>::new(&g, 3.0, AverageWeight::Indicator);
        let psi = AverageStencil::<f64>::new(&g, 3.0, AverageWeight::Psi);
        let outer = AverageStencil::<f64>::new(&g, 4.0, AverageWeight::Indicator);
        assert!(ind.mass() <= psi.mass() && psi.mass() <= outer.mass());
        let field: Vec<f64> = (0..g.len()).map(|i| 1.0 + ((i * 7919) % 13) as f64 / 13.0 - 0.5).collect();
        let sup = field.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        let gap = (psi.apply(&field) - ind.apply(&field)).abs();
        assert!(gap <= sup * (outer.mass() - ind.mass()) + 1e-12);
    }

    #[test]
    fn psi_profile_edges() {
        assert_eq!(psi_profile(2.0, 1.0), 1.0);
        assert_eq!(psi_profile(2.0, 3.0), 0.0);
        assert!((psi_profile(2.0, 2.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn radius_guard() {
        let g = grid();
        let ones = vec![1.0f64; g.len()];
        assert!(spatial_average(&g, &ones, 6.5, AverageWeight::Indicator, 1.0).is_err());
    }
}
