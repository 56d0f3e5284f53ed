//! Exact arithmetic: rationals, multivariate polynomials, rational functions,
//! vector fields and truncated ħ-series.
//!
//! Coefficients are rational functions over ℚ rather than smooth functions.
//! Every identity checked by this crate is pointwise algebraic or
//! differential-polynomial in the structure functions, so this loses nothing
//! for verification. Denominators are formal: nothing is ever evaluated at a
//! zero of a denominator, so results hold on the open dense set where all
//! denominators are nonzero.

mod gcd;
mod hseries;
pub mod linalg;
mod poly;
mod ratfunc;
mod vector_field;

pub use gcd::gcd;
pub use hseries::HSeries;
pub use poly::{Monomial, Poly};
pub use ratfunc::{partial_derive, RatFunc};
pub use vector_field::{vf_apply, vf_bracket, VectorField};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;


/// Rational from an integer.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rational `a/b`.
pub fn qq(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}
