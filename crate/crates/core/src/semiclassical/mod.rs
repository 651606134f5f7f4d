//! Classical atom motion in the adiabatic light field: dipole forces, pattern
//! stability and the spatial structure of the total field.

mod stability;
mod zeros;

pub use stability::{
    least_squares_slope, scaling_probe, Configuration, ScalingExponents, StabilityReport,
    JACOBIAN_STEP,
};
pub use zeros::{
    cancelling_amplitude, field_zero_map, total_field, FieldZeroMap, ZeroGrid, ZERO_ACCEPT,
};
