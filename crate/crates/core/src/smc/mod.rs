//! Bootstrap particle filter with compact path storage.

mod filter;
mod resample;

pub use filter::{
    filter_step, normalize_log_weights, run_filter, run_filter_with, FilterRun, ParticleSystem,
    StepView,
};
pub use resample::{offspring_counts, resample, ResamplingScheme};

use thiserror::Error;

use crate::models::ModelError;
use crate::tree::TreeError;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("every particle has zero likelihood at time {time}")]
    ZeroLikelihood { time: usize },
    #[error("invalid weights: {0}")]
    Weights(String),
    #[error("ancestor {index} at position {position} outside 1..={particles}")]
    AncestorRange {
        position: usize,
        index: usize,
        particles: usize,
    },
    #[error("a filter needs at least one particle")]
    NoParticles,
    #[error("model failure at time {time}: {source}")]
    Model {
        time: usize,
        #[source]
        source: ModelError,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
}
