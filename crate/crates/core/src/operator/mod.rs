//! Small dense complex linear algebra, Lindblad generators and their
//! stationary states.

mod liouvillian;
mod matrix;
mod steady;

pub use liouvillian::{build_liouvillian, dissipator_apply, Liouvillian};
pub use matrix::{sigma_minus, sigma_plus, ComplexMatrix};
pub use steady::{
    expectation, is_degenerate, steady_state, DensityMatrix, SteadyState, DEGENERACY_TOL,
    EIGEN_TOL, HERMITIAN_TOL, RESIDUAL_TOL, TRACE_TOL,
};

pub use num_complex::Complex64;
