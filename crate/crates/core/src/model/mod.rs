//! Truncated atom + cavity Hilbert space, Hamiltonian and Liouvillian.

mod hamiltonian;
mod liouvillian;
mod operators;
mod params;

pub use hamiltonian::{build_hamiltonian, hamiltonian_from};
pub use liouvillian::{
    build_liouvillian, build_liouvillian_capped, liouvillian_from, unvectorize, vectorize,
    Liouvillian,
};
pub use operators::{build_operators, build_operators_capped, OperatorSet, DEFAULT_DIM_CAP};
pub use params::{cos_turns, sin_turns, ModelParams, Site};
