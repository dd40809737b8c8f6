//! Simulation of two-way quantum-classical finite automata, their counter
//! variants, and public-coin proof systems with restarting verifiers.

pub mod constructions;
pub mod error;
pub mod languages;
pub mod machine;
pub mod proofsystems;
pub mod quantum;
pub mod real;
pub mod scalar;

pub use error::{Error, Result};
pub use real::Real;
pub use scalar::Scalar;
