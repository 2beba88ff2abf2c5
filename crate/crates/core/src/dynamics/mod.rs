//! Mechanics layer: Hamiltonians, canonical reductions, the parabolic
//! equilateral orbit and the numerically derived variational systems.
//!
//! This side of the crate is the independent oracle: nothing here reads the
//! exact residue tables, so agreement between [`fuchsian_transform`] and the
//! closed-form pole system is a genuine two-route check.

pub mod hamiltonians;
pub mod nve;
pub mod orbit;
pub mod whittaker;

pub use hamiltonians::{
    hamiltonian_full, hamiltonian_reduced, hamiltonian_relative, reduce_relative,
    reduce_rotating, reduced_vector_field, relative_to_full, rotating_to_relative, BranchHints,
    FullState, PhysParams, ReducedState, RelativeState, TransverseState,
};
pub use nve::{
    f_integral_drift, fuchsian_transform, fuchsian_transform_in, m2_block_scalar, nve_matrix,
    nve_matrix_fd, variational_full,
};
pub use orbit::{
    hamiltonian_on_orbit_exact, lagrange_orbit_exact, energy_relation_identity, OrbitContext,
};
pub use whittaker::{p1_branch, whittaker_field};
