//! State-space models driven by the particle filter.

mod dataset;
mod linear_gaussian;
mod neutral;
mod pz;

pub use dataset::{generate_synthetic, read_observations_csv, Diagnostics, SyntheticData};
pub use linear_gaussian::{kalman_filter, KalmanEstimate, LinearGaussian};
pub use neutral::Neutral;
pub use pz::{integrate_pz, pz_log_obs_density, pz_transition, PzModel, PzParams, PzState};

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("non-finite state after integration: {0}")]
    NonFinite(String),
    #[error("state left the positive orthant: {0}")]
    NonPositive(String),
    #[error("observation {0} outside the support (must be > 0)")]
    ObservationSupport(f64),
    #[error("state outside the observation model's domain: {0}")]
    StateSupport(String),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A hidden Markov model: initial law, transition kernel and observation
/// density, each usable as a sampler.
pub trait StateSpaceModel: Sync {
    type State: Clone + Send + Sync;
    type Obs: Clone + Send + Sync;

    fn name(&self) -> &'static str;

    fn sample_initial<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::State;

    fn sample_transition<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        state: &Self::State,
    ) -> Result<Self::State, ModelError>;

    fn log_obs_density(&self, obs: &Self::Obs, state: &Self::State) -> Result<f64, ModelError>;

    fn sample_obs<R: Rng + ?Sized>(&self, rng: &mut R, state: &Self::State) -> Self::Obs;
}
