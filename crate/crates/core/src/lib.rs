//! Copositive cutting-plane solver for mixed-binary quadratic programs.
//!
//! The dual of a mixed-binary quadratic program is a linear objective over a
//! single copositivity constraint. This crate runs a cutting-plane method on
//! that dual, using a discretized copositivity check as the separation
//! oracle. The check is a QUBO, solved by a pluggable [`qubo::IsingSolver`]
//! (exhaustive search or simulated annealing).

pub mod bench;
pub mod copositivity;
pub mod cutting_plane;
pub mod error;
pub mod matrix;
pub mod model;
pub mod problems;
pub mod qubo;

pub use error::{Error, Result};
pub use matrix::SymMatrix;
