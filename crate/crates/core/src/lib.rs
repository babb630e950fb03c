//! Four-wave asymptotics for the inflow problem of the 1-D full compressible
//! Navier-Stokes equations on the half line.
//!
//! The crate constructs the stationary boundary layer, two rarefaction fans
//! and a viscous contact wave, superposes them into a composite profile,
//! measures how strongly the pieces interact, and integrates the viscous
//! system directly to test nonlinear stability of the composite.

pub mod boundary_layer;
pub mod error;
pub mod gas;
pub mod harness;
pub mod composite;
pub mod contact_wave;
pub mod numerics;
pub mod rarefaction;
pub mod solver;
pub mod wave_curves;

pub use error::{Error, Result};
pub use gas::{GasParams, SonicRegion, ThermoState};
