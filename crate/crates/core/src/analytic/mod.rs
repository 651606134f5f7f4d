//! Closed-form weak-excitation results, derived scales, probe spectra and the
//! coupled-oscillator linear-response oracle.

mod oracle;
mod probe;
mod weak;

pub use oracle::{linear_response_oracle, LinearSteadyState, ORACLE_RESIDUAL_TOL};
pub use probe::{
    probe_formula_applies, probe_peaks, probe_rate, probe_response_oracle, probe_spectrum,
    ProbePeaks, ProbeSpectrum,
};
pub use weak::{
    alpha_weak, derived_scales, free_space_rate, pi_weak, weak_excitation, DerivedScales,
    WeakExcitationResult, SATURATION_MARGIN,
};
