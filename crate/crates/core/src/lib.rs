//! Certified verification of the monodromy obstruction to meromorphic
//! integrability near the Lagrangian parabolic orbit of the planar
//! three-body problem.
//!
//! The crate is organised in layers:
//!
//! - [`exactalg`]: exact arithmetic (rationals, Q(sqrt3, i), polynomials,
//!   matrices, derivations);
//! - [`model`]: mass parameters, symmetric constants, orbit coefficients,
//!   singular points and spectral data in closed form;
//! - [`dynamics`]: the Hamiltonians, canonical reductions, the parabolic
//!   orbit and the numerically derived normal variational system (the
//!   independent oracle);
//! - [`fuchsian`]: the exact residue matrices of the rank-one pole system
//!   and their structural checks, cross-checked against the oracle;
//! - [`monodromy`]: analytic continuation around the singular points and
//!   the monodromy group data;
//! - [`frobenius`]: exact local series solutions at the finite singular
//!   points, including logarithmic terms;
//! - [`obstruction`]: the certificate assembling every check, plus the
//!   symbolic invariant-theory identity suite;
//! - [`cli`]: the command-line front end (`inspect` / `certify` / `scan`).

pub mod cli;
pub mod dynamics;
pub mod exactalg;
pub mod frobenius;
pub mod fuchsian;
pub mod model;
pub mod monodromy;
pub mod numeric;
pub mod obstruction;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dimension / variable-set mismatch.
    Shape(String),
    /// Out-of-domain input (bad masses, k = 0, pole evaluation, ...).
    Domain(String),
    /// A matrix that must be invertible is not.
    Singular(String),
    /// Numerical procedure could not reach the requested accuracy.
    Numerical(String),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::Shape(m) => write!(f, "shape error: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Singular(m) => write!(f, "singular matrix: {m}"),
            Error::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl std::error::Error for Error {}
