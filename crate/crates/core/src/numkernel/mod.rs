//! Arbitrary-precision scalars, parity polynomials, root finding and linear
//! solves: the arithmetic substrate for everything else in the crate.

mod linalg;
mod parity_poly;
pub(crate) mod scalar;
mod univariate;

pub use linalg::lu_solve;
pub use parity_poly::{Parity, ParityPolynomial, Term};
pub use scalar::{bits_for_digits, Scalar};
pub use univariate::{real_roots, Polynomial};
