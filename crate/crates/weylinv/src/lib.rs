//! Exact computation of degree-3 invariant groups for split semisimple groups.

pub mod cli;
pub mod error;
pub mod generators;
pub mod invariants;
pub mod laurent;
pub mod lattice;
pub mod newton;
pub mod root_data;
pub mod syzygy;
pub mod tables;

pub use error::{Error, Result};
