//! Per-step wall time of the tree updates.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ExperimentError};
use crate::models::{generate_synthetic, StateSpaceModel};
use crate::smc::{run_filter_with, ResamplingScheme};

/// Mean prune + insert time over the steps `bucket_start..=bucket_end`,
/// averaged over replicates, in microseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub scheme: ResamplingScheme,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub bucket_start: usize,
    pub bucket_end: usize,
    pub mean_us: f64,
}

/// Steps `1..=ceil(T/20)` are warm-up and left out of every bucket.
pub fn warmup_steps(horizon: usize) -> usize {
    horizon.div_ceil(20)
}

/// Runs every `(scheme, N)` for the largest horizon, one replicate at a
/// time so that runs do not compete for cores, and buckets the step times
/// of each configured horizon.
pub fn bench(config: &ExperimentConfig) -> Result<Vec<BenchRow>, ExperimentError> {
    config.validate()?;
    with_model!(config, |model| bench_model(model, config))
}

fn bench_model<M: StateSpaceModel>(model: &M, config: &ExperimentConfig) -> Result<Vec<BenchRow>, ExperimentError> {
    let horizon = config.max_horizon();
    let mut rows = Vec::new();
    let mut zero_seen = false;
    for &scheme in &config.schemes {
        for &n in &config.n {
            // total[t - 1] sums the step-t time over replicates.
            let mut total = vec![Duration::ZERO; horizon];
            for replicate in 0..config.replicates {
                let seed = config.seed + replicate as u64;
                let data = generate_synthetic(model, horizon, seed)?;
                run_filter_with(model, &data.observations, n, scheme, seed, config.capacity, |view| {
                    if view.system.time > 0 {
                        total[view.system.time - 1] += view.tree_time;
                    }
                })?;
            }
            for &t in &config.t {
                let width = config.bucket.unwrap_or((t / 10).max(1));
                let warmup = warmup_steps(t);
                let mut start = 1;
                while start <= t {
                    let end = (start + width - 1).min(t);
                    let first = start.max(warmup + 1);
                    if first <= end {
                        let sum: Duration = total[first - 1..end].iter().sum();
                        let count = (end - first + 1) * config.replicates;
                        let mean_us = sum.as_secs_f64() * 1e6 / count as f64;
                        zero_seen |= mean_us == 0.0;
                        rows.push(BenchRow {
                            scheme,
                            n,
                            t,
                            bucket_start: first,
                            bucket_end: end,
                            mean_us,
                        });
                    }
                    start = end + 1;
                }
            }
        }
    }
    if zero_seen {
        eprintln!("warning: some buckets averaged to zero; the timer resolution is too coarse for these sizes");
    }
    Ok(rows)
}
