//! Compact storage of particle-filter paths.
//!
//! [`AncestryStore`] keeps only the nodes that still have a descendant among
//! the current generation of particles. Each filter step calls
//! [`AncestryStore::prune`] with the new offspring counts and then
//! [`AncestryStore::insert`] with the new generation; slots freed by pruning
//! are reused by later insertions, so the expected memory footprint stays at
//! the trunk length plus a crown whose size does not grow with time.

mod snapshot;
mod stats;
mod store;

pub use snapshot::{SlotRecord, TreeSnapshot};
pub use stats::TreeStats;
pub use store::{AncestryStore, CapacityPolicy};

use thiserror::Error;

use crate::primitives::PrimitiveError;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("capacity {capacity} is smaller than the generation size {particles}")]
    CapacityTooSmall { capacity: usize, particles: usize },
    #[error("a tree needs at least one particle")]
    Empty,
    #[error("{what} has length {actual}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("offspring counts sum to {actual}, expected {expected}")]
    OffspringSum { expected: usize, actual: usize },
    #[error("ancestor counts disagree with the offspring counts given to prune (leaf rank {rank})")]
    InconsistentAncestors { rank: usize },
    #[error("{called} called out of order: {expected} must come first")]
    OutOfOrder {
        called: &'static str,
        expected: &'static str,
    },
    #[error("leaf rank {rank} outside 1..={particles}")]
    LeafRank { rank: usize, particles: usize },
    #[error("could not grow the slot buffer to {requested} slots")]
    Allocation { requested: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
}
