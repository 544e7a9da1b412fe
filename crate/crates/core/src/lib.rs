//! Direct estimation of the difference between two linear Gaussian SEMs
//! that share a topological order.

pub mod dci;
pub mod error;
pub mod graph;
pub mod io;
pub mod rng;
pub mod sem;
pub mod stats;

pub use error::{Error, ErrorKind, Result};
