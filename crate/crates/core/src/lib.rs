//! Maximum independent set local search with adaptive restarts and
//! repeated-intersection reduction.

pub mod arw;
pub mod bench;
pub mod error;
pub mod framework;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod par;
pub mod reductions;

pub use error::{Error, Result};
pub use graph::{StaticGraph, VertexSet, WorkingGraph};
