//! Self-contained dense complex linear algebra and polynomial kernel.

pub mod cmatrix;
pub mod cpoly;
pub mod dd;
pub mod eig;
pub mod expq;
pub mod solve;

pub type C64 = num_complex::Complex64;

/// Shorthand complex constructor.
#[inline]
pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub use cmatrix::{kron, CMatrix};
pub use cpoly::{lagrange_diff_weights, poly_from_samples, poly_roots, CPoly};
pub use eig::{eig_biorthogonal, eig_pair_at, eigenvalues, order_key, EigenSystem};
pub use expq::{mat_exp_pauli, pauli_combination, pauli_x, pauli_y, pauli_z};
pub use solve::{determinant, inverse, least_squares, lu_decompose, solve_linear, Lu};
