//! Monte Carlo checks of the tree-size bounds against filter runs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ChainParams, TheoryError};
use crate::models::{generate_synthetic, StateSpaceModel};
use crate::smc::{run_filter_with, ResamplingScheme};
use crate::tree::{CapacityPolicy, TreeStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// `d_T`, distance to the most recent common ancestor.
    DistanceToMrca,
    /// `n_T`, stored nodes.
    NodeCount,
    /// `(n_T - T) / (N ln N)`.
    Delta2Hat,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Self::DistanceToMrca => "d_T",
            Self::NodeCount => "n_T",
            Self::Delta2Hat => "delta2_hat",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub quantity: Quantity,
    pub mean: f64,
    /// Standard error of the mean (zero for analytic entries).
    pub stderr: f64,
    /// Analytic bound, when one is available.
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub epsilon: f64,
    pub horizon: usize,
    pub runs: usize,
    /// `1 + 8 / epsilon`.
    pub delta1: f64,
    /// `mean(n_T - T) / (N ln N)`; absent when `N ln N = 0`.
    pub delta2_hat: Option<f64>,
    pub entries: Vec<BoundEntry>,
    /// Final tree statistics of every run, in run order.
    pub runs_stats: Vec<TreeStats>,
}

impl BoundReport {
    pub fn entry(&self, quantity: Quantity) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.quantity == quantity)
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs `runs` independent filters over fresh synthetic data (run `r` uses
/// seed `seed + r` for both the data and the filter) and compares `d_T`
/// against `(1 + 8/eps) N ln N`.
pub fn verify_bounds<M: StateSpaceModel>(
    model: &M,
    params: ChainParams,
    horizon: usize,
    runs: usize,
    scheme: ResamplingScheme,
    seed: u64,
) -> Result<BoundReport, TheoryError> {
    if runs == 0 {
        return Err(TheoryError::Params("runs must be >= 1".into()));
    }
    let n = params.n();
    let runs_stats = (0..runs as u64)
        .into_par_iter()
        .map(|r| -> Result<TreeStats, TheoryError> {
            let data = generate_synthetic(model, horizon, seed + r)?;
            let (_, tree) = run_filter_with(
                model,
                &data.observations,
                n,
                scheme,
                seed + r,
                CapacityPolicy::default(),
                |_| {},
            )?;
            Ok(tree.stats())
        })
        .collect::<Result<Vec<_>, _>>()?;

    let d: Vec<f64> = runs_stats.iter().map(|s| s.distance_to_mrca as f64).collect();
    let nodes: Vec<f64> = runs_stats.iter().map(|s| s.node_count as f64).collect();
    let (d_mean, d_se) = mean_stderr(&d);
    let (n_mean, n_se) = mean_stderr(&nodes);
    let n_log_n = n as f64 * (n as f64).ln();
    let delta1 = params.delta1();
    Ok(BoundReport {
        n,
        epsilon: params.epsilon(),
        horizon,
        runs,
        delta1,
        delta2_hat: (n_log_n > 0.0).then(|| (n_mean - horizon as f64) / n_log_n),
        entries: vec![
            BoundEntry {
                quantity: Quantity::DistanceToMrca,
                mean: d_mean,
                stderr: d_se,
                bound: Some(delta1 * n_log_n),
            },
            BoundEntry {
                quantity: Quantity::NodeCount,
                mean: n_mean,
                stderr: n_se,
                bound: None,
            },
        ]
        .into_iter()
        .chain((n_log_n > 0.0).then(|| BoundEntry {
            quantity: Quantity::Delta2Hat,
            mean: (n_mean - horizon as f64) / n_log_n,
            stderr: n_se / n_log_n,
            bound: None,
        }))
        .collect(),
        runs_stats,
    })
}
