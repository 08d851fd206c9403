//! Compiles array operations (unordered search, bounding-index search, match
//! counting and sorting) into QUBO Hamiltonians for quantum annealers, and
//! verifies them with exact ground-state enumeration and simulated annealing.

pub mod analyzer;
pub mod bounds;
pub mod error;
pub mod gadgets;
pub mod io;
pub mod parallel;
pub mod poly;
pub mod program;
pub mod search;
pub mod solver;
pub mod sort;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
