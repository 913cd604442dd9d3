//! Numerical integration: globally adaptive Gauss–Kronrod (7/15) and fixed Gauss–Legendre rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Relative disagreement above which a result is rejected outright.
pub const HARD_FAILURE: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kron += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Globally adaptive bisection driven by the Kronrod–Gauss difference.
#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_segments: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_segments: 200_000,
        }
    }
}

impl Integrator {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, context: &str) -> Result<f64> {
        self.integrate_over(f, &[a, b], context)
    }

    /// Integrates over consecutive panels `[p0, p1], [p1, p2], ...` with one global error budget.
    pub fn integrate_over<F: Fn(f64) -> f64>(&self, f: F, breakpoints: &[f64], context: &str) -> Result<f64> {
        if breakpoints.len() < 2 {
            return Ok(0.0);
        }
        let mut heap: BinaryHeap<Segment> = breakpoints
            .windows(2)
            .filter(|w| w[1] != w[0])
            .map(|w| kronrod(&f, w[0], w[1]))
            .collect();
        loop {
            let (value, error) = heap
                .iter()
                .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
            let target = (self.rel_tol * value.abs()).max(self.abs_tol);
            if error <= target {
                return Ok(value);
            }
            if heap.len() >= self.max_segments {
                let disagreement = if value != 0.0 { error / value.abs() } else { error };
                if disagreement <= HARD_FAILURE {
                    return Ok(value);
                }
                return Err(Error::Quadrature {
                    context: context.to_string(),
                    estimate: value,
                    disagreement,
                });
            }
            let worst = heap.pop().expect("heap is non-empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Interval exhausted at machine precision; keep it but stop refining it.
                heap.push(Segment { error: 0.0, ..worst });
                continue;
            }
            heap.push(kronrod(&f, worst.a, mid));
            heap.push(kronrod(&f, mid, worst.b));
        }
    }

    /// `∫_a^b (x - a)^p g(x) dx` for `p > -1`, with the endpoint power absorbed by the
    /// substitution `x = a + (b - a) u^{1/(1+p)}`.
    pub fn integrate_endpoint_power<G: Fn(f64) -> f64>(
        &self,
        g: G,
        a: f64,
        b: f64,
        p: f64,
        context: &str,
    ) -> Result<f64> {
        if p <= -1.0 {
            return Err(crate::error::invalid("p", format!("endpoint exponent {p} is not integrable")));
        }
        let width = b - a;
        let q = 1.0 / (1.0 + p);
        let scale = width.powf(1.0 + p) / (1.0 + p);
        let inner = self.integrate(|u| g(a + width * u.powf(q)), 0.0, 1.0, context)?;
        Ok(scale * inner)
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let Some(degree) = NonZeroUsize::new(n) else {
        return (Vec::new(), Vec::new());
    };
    let mut pairs = GaussLegendre::new(degree).as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Composite Gauss–Legendre rule on `[a, b]` with `panels` equal panels of `order` points.
pub fn composite_rule(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(lo + 0.5 * h * (xi + 1.0));
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n = {n}");
            let degree = 2 * n - 1;
            let integral: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(degree as i32 - 1)).sum();
            let exact = if (degree - 1) % 2 == 0 { 2.0 / degree as f64 } else { 0.0 };
            assert!((integral - exact).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn adaptive_rule_handles_smooth_and_oscillatory_integrands() {
        let q = Integrator::default();
        let v = q.integrate(|x| x.exp(), 0.0, 1.0, "exp").unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-13);
        let v = q.integrate(|x| (40.0 * x).cos(), 0.0, 3.0, "cos").unwrap();
        assert!((v - (120.0f64).sin() / 40.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_power_substitution_resolves_singularities() {
        let q = Integrator::default();
        // ∫_0^2 (2 - h) h^{-0.9} dh = 2 * 2^{0.1}/0.1 - 2^{1.1}/1.1
        let v = q.integrate_endpoint_power(|h| 2.0 - h, 0.0, 2.0, -0.9, "power").unwrap();
        let exact = 2.0 * 2f64.powf(0.1) / 0.1 - 2f64.powf(1.1) / 1.1;
        assert!((v / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unresolvable_integrand_is_reported() {
        let q = Integrator {
            max_segments: 8,
            ..Integrator::default()
        };
        let err = q.integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, "wild").unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
