//! Thin Cosserat (micropolar) elastic plates.
//!
//! The crate is layered bottom-up:
//!
//! * [`material`] holds the moduli, admissibility checks and derived constants.
//! * [`cosserat3d`] is the pointwise 3D constitutive law, used as an oracle.
//! * [`plate_fields`] and [`plate_constitutive`] carry the plate-level algebra.
//! * [`operators`] builds the flexural/extensional symbols and boundary operators.
//! * [`dynamics`] discretizes them on a rectangle (static solves, leapfrog).
//! * [`dispersion`] does plane-wave analysis.
//! * [`verify`] bundles the oracle suites used by the CLI and the tests.

pub mod cosserat3d;
pub mod dispersion;
pub mod dynamics;
pub mod error;
pub mod material;
pub mod operators;
pub mod plate_constitutive;
pub mod plate_fields;
pub mod poly;
pub mod verify;

pub use error::{Error, Result};
pub use material::{MaterialParams, MicroInertia, ReciprocalParams, ShearCorrection, TechnicalConstants};
