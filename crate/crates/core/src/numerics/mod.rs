//! Special functions and the adaptive integrator shared by every solver.

mod integrator;
mod special;

pub use integrator::{
    integrate_schrodinger, ConstantHamiltonian, FnHamiltonian, HamiltonianEvaluator, Integrator,
    Trajectory, DEFAULT_TOLERANCE,
};
pub use special::{
    legendre_p, legendre_p_prime, legendre_table, spherical_bessel_j, spherical_neumann_n,
    MAX_BESSEL_ORDER,
};

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as Complex;

/// Dynamically sized complex matrix (the evaluators use n = 2 or n = 4).
pub type CMatrix = DMatrix<Complex>;
/// Dynamically sized complex state vector.
pub type CVector = DVector<Complex>;

/// Imaginary unit.
pub const I: Complex = Complex::new(0.0, 1.0);

/// Shorthand for a real-valued complex number.
#[inline]
pub fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}
