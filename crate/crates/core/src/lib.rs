//! Surface currents for high-frequency plane-wave scattering by smooth convex
//! obstacles in the plane.
//!
//! The surface current is the normal derivative of the total field on the
//! boundary of a sound-soft obstacle. This crate computes it four ways:
//!
//! * the exact modal (Bessel/Hankel) series on the circle ([`reference`]),
//! * physical optics and local absorbing-condition closures ([`currents`]),
//! * a shadow-boundary transition ansatz built on the Fock-type function Ψ
//!   ([`fock`], [`ansatz`]),
//!
//! and provides an experiment harness ([`harness`]) that compares them and
//! fits the high-frequency scaling laws.

pub mod ansatz;
pub mod currents;
pub mod error;
pub mod fit;
pub mod fock;
pub mod geometry;
pub mod harness;
pub mod quad;
pub mod reference;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex value carried through every public operation.
pub type ComplexScalar = Complex64;

/// Imaginary unit.
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
