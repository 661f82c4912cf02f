//! Exact computations with logarithmic derivations of free hyperplane
//! arrangements, their enveloping algebras and the associated cohomology.

pub mod arrangement;
pub mod cohomology;
pub mod derivation;
pub mod enveloping;
pub mod error;
pub mod koszul;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod verify;
mod text;

pub use error::{Error, Result};
pub use num_rational::BigRational;
pub use poly::{Monomial, Polynomial};
pub use scalar::{Cyclotomic, Field};

/// Rational scalars.
pub type Rational = BigRational;
/// Polynomials with rational coefficients.
pub type QPoly = Polynomial<Rational>;
/// Polynomials over a cyclotomic field.
pub type CyclotomicPoly = Polynomial<Cyclotomic>;
