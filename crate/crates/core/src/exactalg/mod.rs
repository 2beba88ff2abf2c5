//! Exact arithmetic substrate: rationals, the number field Q(sqrt3, i),
//! multivariate polynomials, exact matrices and linear derivations.

pub mod derivation;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use derivation::LinearField;
pub use field::FieldElement;
pub use matrix::{charpoly_string, eval_poly_coeffs, FieldMatrix, PolyMatrix};
pub use poly::{varset, MultiPoly, VarSet};
pub use rational::{parse_rational, rat, ratio, rational_string, rational_to_f64, Rational};
