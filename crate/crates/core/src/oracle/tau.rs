use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::quad::Integrator;

/// `∫_{B_1} |x - y|^{-β} dy` for `|x| = a` in `d = 3`, from exact antiderivatives of
/// `(2π/((2-β)a)) ∫_0^1 ρ [(a+ρ)^{2-β} - |a-ρ|^{2-β}] dρ`.
pub fn ball_potential_3d(beta: f64, a: f64) -> f64 {
    let e = 2.0 - beta;
    if a == 0.0 {
        // ∫_{B_1} |y|^{-β} dy.
        return 4.0 * PI / (3.0 - beta);
    }
    let plus = {
        let up = |v: f64| v.powf(e + 2.0) / (e + 2.0) - a * v.powf(e + 1.0) / (e + 1.0);
        up(a + 1.0) - up(a)
    };
    let minus = a.powf(e + 2.0) * (1.0 / (e + 1.0) - 1.0 / (e + 2.0))
        + (1.0 - a).powf(e + 2.0) / (e + 2.0)
        + a * (1.0 - a).powf(e + 1.0) / (e + 1.0);
    2.0 * PI / (e * a) * (plus - minus)
}

/// Closed forms of `τ_β`: `2^{3-β}/((1-β)(2-β))` in `d = 1`, the radial integral of the
/// ball potential in `d = 3`.
pub fn closed_form_tau(dim: usize, beta: f64) -> Result<f64> {
    match dim {
        1 => {
            if !(beta > 0.0 && beta < 1.0) {
                return Err(invalid("beta", "d = 1 needs 0 < beta < 1"));
            }
            Ok(2f64.powf(3.0 - beta) / ((1.0 - beta) * (2.0 - beta)))
        }
        3 => {
            if !(beta > 0.0 && beta < 2.0) {
                return Err(invalid("beta", "d = 3 needs 0 < beta < 2"));
            }
            let radial = Integrator::with_rel_tol(1e-12).integrate(
                |a| a * a * ball_potential_3d(beta, a),
                0.0,
                1.0,
                "ball potential",
            )?;
            Ok(4.0 * PI * radial)
        }
        _ => Err(invalid("dim", format!("no closed form for d = {dim}"))),
    }
}
