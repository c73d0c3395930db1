//! Exact linear representations of k-regular sequences, with the tools
//! needed to bracket the growth exponent of `Σ_{m≤x} |η(m)|`, where `η` is
//! the autocorrelation of the Thue–Morse sequence.
//!
//! * [`exactnum`]: rationals, dyadic rationals, small matrices, characteristic polynomials.
//! * [`linrep`]: evaluation, sums, radix lifts and point-wise products of representations.
//! * [`sequences`]: Thue–Morse, `η`, paperfolding, Rudin–Shapiro and twisted partial sums.
//! * [`spectral`]: eigenvalues, dominance checks and joint-spectral-radius bounds.
//! * [`bounds`]: the lower- and upper-bound tables and the Rényi dimension estimates.

pub mod bounds;
pub mod error;
pub mod exactnum;
pub mod fmt;
pub mod linrep;
pub mod parallel;
pub mod repfile;
pub mod sequences;
pub mod spectral;

pub use error::{Error, Result};
pub use exactnum::{DyadicScalar, Matrix, Polynomial, Rational};
pub use linrep::{LinearRep, Representation};
pub use parallel::Parallelism;
