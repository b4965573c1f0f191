//! Weighted blowups of compound Du Val threefold singularities.
//!
//! Everything is exact: polynomials over Q (`Poly`), with prime fields only
//! used for randomized certificates.

pub mod blowup;
pub mod curvegeom;
pub mod factor;
pub mod lattice;
pub mod newton;
pub mod normalform;
pub mod polyring;
pub mod scalar;
pub mod theorems;
pub mod unipoly;
mod zassenhaus;

pub use blowup::Weight;
pub use polyring::{parse_polynomial, ExponentVector, Polynomial, Substitution};
pub use scalar::Rational;

/// Polynomials over Q, the type every public operation works with.
pub type Poly = Polynomial<Rational>;
