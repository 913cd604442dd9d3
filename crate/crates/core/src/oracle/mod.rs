//! Independent references: continuum quadrature, closed forms, exact scheme moments and a
//! dense finite-difference simulator.

mod dense;
mod discrete;
mod quadrature;
mod tau;

pub use dense::{check_cfl, laplacian, leapfrog_free, DensePath, DenseSimulator};
pub use discrete::{constant_sigma_mollifier_gap, stencil_energy, SchemeMoments};
pub use quadrature::{exact_increment_quadrature, exact_variance_quadrature};
pub use tau::{ball_potential_3d, closed_form_tau};
