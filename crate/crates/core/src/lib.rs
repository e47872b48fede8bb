//! Deviation inequalities for induced edge counts of random vertex subsets
//! in k-uniform hypergraphs.

pub mod bounds;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod families;
pub mod hypergraph;
pub mod lab;
pub mod martingale;
pub mod partite;
mod serde_rational;

pub use error::{Error, Result};
pub use hypergraph::{EdgeSource, Hypergraph, RegularityMode, RegularityReport};
