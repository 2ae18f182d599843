//! Finite-element model of a sprung-mass vehicle crossing a rail resting on
//! a simply supported bridge deck through a continuous spring-damper bed.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and the verification oracles live in the `trackbridge` crate.
//!
//! Layout of the modules, bottom-up:
//!
//! * [`hermite`]: cubic Hermite shape functions and the two element integrals.
//! * [`irregularity`]: rail surface profiles `r(x)`, `r'(x)`, `r''(x)`.
//! * [`vehicle`]: vehicle parameters and wheel localization on the mesh.
//! * [`coupling`]: time-varying wheel-rail interaction blocks.
//! * [`assembly`]: connectivity, global rail-bridge matrices, supports, vehicle scatter.
//! * [`newmark`]: incremental Newmark-β stepping for time-varying systems.
//! * [`sim`]: the crossing simulation loop and response probes.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assembly;
pub mod coupling;
mod error;
pub mod hermite;
pub mod irregularity;
pub mod linalg;
pub mod newmark;
pub mod sim;
pub mod vehicle;

pub use error::{Error, Result};

/// Standard gravity used by default, m/s².
pub const GRAVITY: f64 = 9.81;
