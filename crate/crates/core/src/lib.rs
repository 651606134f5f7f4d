//! Driven two-level atoms in a lossy standing-wave cavity.
//!
//! The crate covers the exact steady state of the master equation for a few
//! atoms ([`steady`]), closed-form weak-excitation results and probe spectra
//! ([`analytic`]), classical pattern stability and field-zero maps
//! ([`semiclassical`]), and a sweep engine that writes CSV and SVG output
//! ([`sweep`]).
//!
//! Units: ħ = γ = λ = 1 unless set otherwise in [`ModelParams`].

pub mod analytic;
pub mod error;
pub mod model;
pub mod semiclassical;
pub mod sparse;
pub mod steady;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{ModelParams, Site};
