//! Special functions: complex Airy functions and integer-order Bessel/Hankel
//! sequences.

mod airy;
mod bessel;

pub use airy::{
    airy_ai, airy_aplus, airy_connection_residual, airy_expansion, airy_scaled, airy_series, AiryPair, Rotation,
    ScaledAiry, AI0, AIP0, SERIES_RADIUS, VALIDATED_RADIUS,
};
pub(crate) use airy::omega;
pub use bessel::{bessel_j_sequence, bessel_jy_sequence, hankel1_derivatives, hankel1_sequence};
