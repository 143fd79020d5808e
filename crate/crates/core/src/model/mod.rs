//! Potentials and the momentum lattice.

mod lattice;
mod potential;

pub use lattice::{LatticeSpec, Momentum, MAX_DIM};
pub use potential::{
    validate_potential, Potential, PotentialFamily, Validation, Violation, DEFAULT_TAIL_TOL,
};
