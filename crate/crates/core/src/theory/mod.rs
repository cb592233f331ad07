//! Coalescence theory for particle-filter genealogies: transition laws of
//! the ancestor-count chains, the dominating chain's hitting time, the
//! series behind the crown-size bound, and Monte Carlo checks of the
//! tree-size bounds.

mod bounds;
mod chains;
mod combinatorics;
mod lemma;

pub use bounds::{mean_stderr, verify_bounds, BoundEntry, BoundReport, Quantity};
pub use chains::{
    expected_coalescence_bound, k_transition_row, p_nq, simulate_aprime_image, simulate_coupled,
    simulate_l_hitting, simulate_l_hitting_many, z_expected_next, z_transition_row, ChainLaw,
    ChainLaws, ChainParams, CoupledPath,
};
pub use combinatorics::{log_add_exp, log_stirling2, log_sum_exp, LogFactorials, StirlingTable};
pub use lemma::{g_n_eps, u_sequence, u_series_sum, USequence, USeriesSum};

use thiserror::Error;

use crate::models::ModelError;
use crate::smc::FilterError;

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("Stirling number S({q}, {p}) requires 1 <= p <= q")]
    StirlingArgs { q: usize, p: usize },
    #[error("state {q} outside 1..={n}")]
    StateOutOfRange { q: usize, n: usize },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("epsilon = 0: coalescence never happens and the expectation is infinite")]
    InfiniteExpectation,
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
