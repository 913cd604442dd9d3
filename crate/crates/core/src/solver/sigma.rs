use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Lipschitz, `C¹` nonlinearities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sigma {
    /// `σ ≡ value`.
    Constant { value: f64 },
    /// `σ(u) = a + b u`.
    Affine { a: f64, b: f64 },
    /// `σ(u) = u`.
    Identity,
}

impl Sigma {
    #[inline]
    pub fn eval<S: Scalar>(&self, u: S) -> S {
        match *self {
            Sigma::Constant { value } => S::of(value),
            Sigma::Affine { a, b } => S::of(a) + S::of(b) * u,
            Sigma::Identity => u,
        }
    }

    pub fn lipschitz(&self) -> f64 {
        match *self {
            Sigma::Constant { .. } => 0.0,
            Sigma::Affine { b, .. } => b.abs(),
            Sigma::Identity => 1.0,
        }
    }

    /// `Some(c)` when `σ ≡ c`.
    pub fn constant_value(&self) -> Option<f64> {
        match *self {
            Sigma::Constant { value } => Some(value),
            Sigma::Affine { a, b } if b == 0.0 => Some(a),
            _ => None,
        }
    }

    /// Coefficients `(a, b)` of the affine form `a + b u`.
    pub fn affine(&self) -> (f64, f64) {
        match *self {
            Sigma::Constant { value } => (value, 0.0),
            Sigma::Affine { a, b } => (a, b),
            Sigma::Identity => (0.0, 1.0),
        }
    }
}
