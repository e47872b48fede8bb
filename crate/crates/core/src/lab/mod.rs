//! Monte Carlo and exhaustive estimation of deviation tails.

mod ci;
mod estimate;
mod exact;
pub mod kernels;
mod sampling;

pub use ci::{clopper_pearson, normal_interval};
pub use estimate::{tail_estimate, SampleStats, SubsetModel, TailRow, CHUNK};
pub use exact::{exact_distribution, pmodel_exact_tail, ExactDistribution};
pub use kernels::{ap3_count, Ap3Counter, Ap3Method};
pub use sampling::{sample_m, sample_m_seeded, sample_p, sample_p_seeded, stream_rng};

use crate::hypergraph::Hypergraph;

/// Anything that can count the edges induced by a vertex set.
pub trait InducedCounter: Sync {
    fn vertex_count(&self) -> usize;
    fn edge_count(&self) -> u64;
    fn uniformity(&self) -> usize;
    /// N(B) for the (not necessarily sorted) set `set`.
    fn count(&self, set: &[u32]) -> u64;
}

impl InducedCounter for Hypergraph {
    fn vertex_count(&self) -> usize {
        Hypergraph::vertex_count(self)
    }
    fn edge_count(&self) -> u64 {
        Hypergraph::edge_count(self)
    }
    fn uniformity(&self) -> usize {
        Hypergraph::uniformity(self)
    }
    fn count(&self, set: &[u32]) -> u64 {
        self.count_induced(set).expect("sampled vertices are in range")
    }
}
