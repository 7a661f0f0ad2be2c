//! Sixth-order compact finite differences for the Poisson interface problem.

pub mod error;
pub mod expr;
pub mod geometry;
pub mod harness;
pub mod jets;
pub mod scheme;
pub mod solver;

pub use error::{Error, Result};
