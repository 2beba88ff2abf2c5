//! Double-precision support layer: small complex matrices, polynomial
//! roots, forward-mode duals and the adaptive integrator.

pub mod cmatrix;
pub mod dual;
pub mod rk45;
pub mod roots;

pub use cmatrix::{C64, CMat};
pub use dual::{gradient, hessian, CScalar, Dual};
pub use roots::{multiset_match_max_distance, polynomial_roots, polynomial_roots_polished};
