//! Exact integer linear algebra: dense arbitrary-precision matrices,
//! support propagation, primitivity and spectral utilities.

mod matrix;
mod polynomial;
mod spectral;
mod support;

pub use matrix::{mat_mul, mat_mul_with, mat_pow, BoolMatrix, IntMatrix};
pub use polynomial::IntPolynomial;
pub use spectral::{
    char_poly, char_poly_with_cap, determinant, perron_eigenvalue, perron_estimate, PerronEstimate,
    DEFAULT_CHAR_POLY_CAP, DEFAULT_MAX_ITERATIONS,
};
pub use support::{positivity_index, support_propagate, wielandt_bound, SupportSet};
