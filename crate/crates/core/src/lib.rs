//! Algebraic intersection spaces over the rationals.
//!
//! From a duality ladder around the singular set (see [`tube`]) and the
//! homology of the complement (see [`global`]) this crate builds intersection
//! approximations, tests their local duality obstructions, assembles the
//! intersection space with its duality pairing, and compares its middle
//! signature with the Novikov signature. All arithmetic is exact.

pub mod approximation;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod global;
pub mod graded;
pub mod instance;
pub mod linalg;
pub mod pairing;
pub mod report;
pub mod tube;

pub use error::{Error, Result};
