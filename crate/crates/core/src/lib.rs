//! Exact computations with sheets, Slodowy slices and nilpotent K-orbits
//! for the symmetric pairs of type A (`gl_N` with involutions of types
//! AI, AII and AIII).
//!
//! All arithmetic is over the rationals and exact.

pub mod ab_diagram;
pub mod epsilon;
pub mod error;
pub mod gl_setup;
pub mod involution;
pub mod linalg;
pub mod partition;
pub mod sheets;
pub mod verify;

pub use error::{Error, Result};
pub use partition::Partition;
