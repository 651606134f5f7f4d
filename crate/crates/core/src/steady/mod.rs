//! Steady states, time evolution and measured quantities.

mod density;
mod evolve;
mod observables;
mod solve;

pub use density::{
    coherent_state, fock_state, DensityMatrix, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL,
};
pub use evolve::{evolve, StepControl, TRACE_DRIFT_TOL};
pub use observables::{coherent_fidelity, observables, Observables, G2_PHOTON_FLOOR};
pub use solve::{
    relative_residual, solve_steady, steady_state, DENSE_CUTOFF, RESIDUAL_TOL, TRUNCATION_TOL,
};

/// Partial trace over the atoms.
pub fn reduced_field_state(rho: &DensityMatrix) -> nalgebra::DMatrix<num_complex::Complex64> {
    rho.reduced_field_state()
}
