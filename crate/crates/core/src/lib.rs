pub mod autgroup;
pub mod coloring;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod izmestiev;
pub mod oracle;
pub mod perm;
pub mod polytope;
pub mod reconstruct;
pub mod tolerance;

pub use error::{Error, Result, ValidationError};
