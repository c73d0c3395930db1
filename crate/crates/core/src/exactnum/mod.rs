//! Exact scalars and small dense matrices.
//!
//! [`Rational`] is the general scalar; [`DyadicScalar`] covers the values
//! `p / 2^e` that appear in lifted digit matrices. All types are plain
//! values and can be shared freely between threads.

mod dyadic;
mod matrix;
mod poly;
mod rational;

pub use dyadic::DyadicScalar;
pub use matrix::{sum_matrices, Matrix, Scalar};
pub use poly::{char_poly, Polynomial, CHAR_POLY_MAX_DIM};
pub use rational::Rational;

/// `a · b` for conforming matrices.
pub fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> crate::Result<Matrix<T>> {
    a.mat_mul(b)
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.kron(b)
}
