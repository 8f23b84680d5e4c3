//! A finite-domain constraint lab for breaking value symmetry.
//!
//! Variables are 0-based indices; values are `1..=max_value`. The crate
//! provides a propagation engine, the symmetry breaking constraints and
//! decompositions, brute-force consistency oracles, search, and the
//! instance families used to compare them.

pub mod consistency;
pub mod constraint;
pub mod domain;
pub mod engine;
pub mod error;
pub mod instances;
pub mod perm;
pub mod problem;
pub mod search;
pub mod symmetry;

#[cfg(test)]
mod testutil;

pub type Var = usize;
pub type Value = usize;

pub use constraint::{Constraint, Parity};
pub use domain::{Assignment, DomainSet};
pub use engine::{Cause, PropagationOutcome, Pruning};
pub use error::{Error, Result};
pub use perm::Permutation;
pub use problem::Problem;
pub use symmetry::{PugetEncoding, PugetVariant, SymmetrySet, ValueClassPartition};
