use std::time::{Duration, Instant};

use rand::Rng;

use super::{offspring_counts, resample, FilterError, ResamplingScheme};
use crate::models::StateSpaceModel;
use crate::rng::{stream_rng, Domain};
use crate::tree::{AncestryStore, CapacityPolicy, TreeStats};

/// The current generation of a bootstrap filter.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSystem<S> {
    pub states: Vec<S>,
    /// Unnormalized log-weights `log g(y_t | x_t^k)`.
    pub log_weights: Vec<f64>,
    /// Normalized weights, summing to one.
    pub norm_weights: Vec<f64>,
    /// 1-based ancestor ranks drawn at this step (identity at time 0).
    pub ancestors: Vec<usize>,
    pub time: usize,
}

impl<S> ParticleSystem<S> {
    pub fn initial(states: Vec<S>) -> Self {
        let n = states.len();
        Self {
            states,
            log_weights: vec![0.0; n],
            norm_weights: vec![1.0 / n as f64; n],
            ancestors: (1..=n).collect(),
            time: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Weighted average of `f` over the particles.
    pub fn weighted_mean(&self, f: impl Fn(&S) -> f64) -> f64 {
        self.states
            .iter()
            .zip(&self.norm_weights)
            .map(|(s, w)| w * f(s))
            .sum()
    }
}

/// Normalizes log-weights with the log-sum-exp shift. Returns `None` when
/// every weight is zero (or any is NaN).
pub fn normalize_log_weights(log_weights: &[f64]) -> Option<Vec<f64>> {
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() || log_weights.iter().any(|l| l.is_nan()) {
        return None;
    }
    let mut w: Vec<f64> = log_weights.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    Some(w)
}

/// Advances the filter by one observation: resample, prune the tree,
/// propagate, weight, insert the new generation.
///
/// Returns the wall time spent in the tree's prune and insert.
pub fn filter_step<M, R>(
    sys: &mut ParticleSystem<M::State>,
    obs: &M::Obs,
    model: &M,
    scheme: ResamplingScheme,
    rng: &mut R,
    tree: &mut AncestryStore<M::State>,
) -> Result<Duration, FilterError>
where
    M: StateSpaceModel,
    R: Rng + ?Sized,
{
    let time = sys.time + 1;
    let n = sys.len();
    let ancestors = resample(&sys.norm_weights, scheme, rng)?;
    let counts = offspring_counts(&ancestors, n)?;

    let started = Instant::now();
    tree.prune(&counts)?;
    let mut tree_time = started.elapsed();

    let states = ancestors
        .iter()
        .map(|&a| model.sample_transition(rng, &sys.states[a - 1]))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|source| FilterError::Model { time, source })?;
    let log_weights = states
        .iter()
        .map(|x| model.log_obs_density(obs, x))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|source| FilterError::Model { time, source })?;
    let norm_weights =
        normalize_log_weights(&log_weights).ok_or(FilterError::ZeroLikelihood { time })?;

    let stored = states.clone();
    let started = Instant::now();
    tree.insert(stored, &ancestors)?;
    tree_time += started.elapsed();

    *sys = ParticleSystem {
        states,
        log_weights,
        norm_weights,
        ancestors,
        time,
    };
    Ok(tree_time)
}

/// What an observer sees after initialization and after each step.
pub struct StepView<'a, S> {
    pub system: &'a ParticleSystem<S>,
    pub tree: &'a AncestryStore<S>,
    /// Time spent in prune + insert during this step (zero at time 0).
    pub tree_time: Duration,
}

/// Runs the filter over `observations`, calling `observer` at time 0 and
/// after every step. Step `t` draws from random stream `t` of `seed`.
pub fn run_filter_with<M, F>(
    model: &M,
    observations: &[M::Obs],
    particles: usize,
    scheme: ResamplingScheme,
    seed: u64,
    policy: CapacityPolicy,
    mut observer: F,
) -> Result<(ParticleSystem<M::State>, AncestryStore<M::State>), FilterError>
where
    M: StateSpaceModel,
    F: FnMut(StepView<'_, M::State>),
{
    if particles == 0 {
        return Err(FilterError::NoParticles);
    }
    let mut rng = stream_rng(seed, Domain::Filter, 0);
    let initial: Vec<M::State> = (0..particles).map(|_| model.sample_initial(&mut rng)).collect();
    let mut tree = AncestryStore::with_policy(initial.clone(), policy)?;
    let mut sys = ParticleSystem::initial(initial);
    observer(StepView {
        system: &sys,
        tree: &tree,
        tree_time: Duration::ZERO,
    });
    for (i, y) in observations.iter().enumerate() {
        let mut rng = stream_rng(seed, Domain::Filter, (i + 1) as u64);
        let tree_time = filter_step(&mut sys, y, model, scheme, &mut rng, &mut tree)?;
        observer(StepView {
            system: &sys,
            tree: &tree,
            tree_time,
        });
    }
    Ok((sys, tree))
}

/// Result of [`run_filter`]: the final generation, its tree, and the tree
/// statistics after every step (`stats[t]` for `t = 0..=T`).
#[derive(Debug, Clone)]
pub struct FilterRun<S> {
    pub system: ParticleSystem<S>,
    pub tree: AncestryStore<S>,
    pub stats: Vec<TreeStats>,
}

pub fn run_filter<M: StateSpaceModel>(
    model: &M,
    observations: &[M::Obs],
    particles: usize,
    scheme: ResamplingScheme,
    seed: u64,
) -> Result<FilterRun<M::State>, FilterError> {
    let mut stats = Vec::with_capacity(observations.len() + 1);
    let (system, tree) = run_filter_with(
        model,
        observations,
        particles,
        scheme,
        seed,
        CapacityPolicy::default(),
        |view| stats.push(view.tree.stats()),
    )?;
    Ok(FilterRun {
        system,
        tree,
        stats,
    })
}
