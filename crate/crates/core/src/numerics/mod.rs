//! Numeric kernels shared by the physics modules: adaptive quadrature of
//! complex integrands, log-domain combinatorics and the 4x4 Hermitian
//! eigenvalue work behind concurrence.

mod linalg;
mod logspace;
mod quadrature;

pub use linalg::{concurrence_spectrum, hermitian_eigen, spin_flip, Matrix4c};
pub use logspace::{log_binomial, log_sum_exp, LogWeight};
pub use quadrature::{
    integrate_complex, integrate_complex_best_effort, integrate_complex_with_breaks, MomentumCutoff, Quadrature,
    QuadratureConfig,
};
