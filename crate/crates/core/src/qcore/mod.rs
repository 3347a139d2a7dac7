//! Dense complex linear algebra for small quantum systems: states, Hermitian
//! and unitary operators, norms, Kronecker products, Hermitian
//! eigendecomposition and exact exponentials of Hermitian generators.
//!
//! Storage is dense and row-major. Operators are immutable once built; every
//! operation returns a fresh value.

mod eigen;
mod matrix;
mod state;

pub use eigen::{eig_hermitian, EigenDecomposition};
pub use matrix::{Hermitian, Matrix, Unitary};
pub use state::State;

/// Complex scalar used everywhere in the crate.
pub type C64 = num_complex::Complex64;

/// Tolerance used when validating Hermiticity on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerance used when validating unit norm on construction.
pub const NORM_TOL: f64 = 1e-12;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Kronecker product of two dense matrices.
pub fn tensor(a: &Matrix, b: &Matrix) -> Matrix {
    a.kron(b)
}

/// Frobenius norm `sqrt(Tr[A^dagger A])`.
pub fn frobenius_norm(a: &Hermitian) -> f64 {
    a.frobenius_norm()
}

/// Spectral norm: the largest singular value, i.e. `max |lambda|` for a
/// Hermitian argument.
pub fn spectral_norm(a: &Hermitian) -> crate::Result<f64> {
    a.spectral_norm()
}

/// `exp(-i A dt)` for Hermitian `A` (with `hbar = 1`).
pub fn expm_step(a: &Hermitian, dt: f64) -> crate::Result<Unitary> {
    a.expm_step(dt)
}

/// Pauli matrices and a few fixed operators.
pub mod pauli {
    use super::{c, Hermitian, Matrix};

    /// `sigma_x`.
    pub fn x() -> Hermitian {
        Hermitian::from_matrix_unchecked(Matrix::from_rows(2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]))
    }

    /// `sigma_y`.
    pub fn y() -> Hermitian {
        Hermitian::from_matrix_unchecked(Matrix::from_rows(2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]))
    }

    /// `sigma_z`.
    pub fn z() -> Hermitian {
        Hermitian::from_matrix_unchecked(Matrix::from_rows(2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]))
    }
}
