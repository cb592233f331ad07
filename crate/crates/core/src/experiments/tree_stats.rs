//! Node-count statistics over a sweep of `(scheme, N, T, replicate)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{in_pool, ExperimentConfig, ExperimentError};
use crate::models::{generate_synthetic, StateSpaceModel};
use crate::smc::{run_filter_with, ResamplingScheme};
use crate::tree::TreeStats;

/// One row per `(scheme, N, T, replicate)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeStatsRow {
    pub model: String,
    pub scheme: ResamplingScheme,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub replicate: usize,
    #[serde(rename = "n_T")]
    pub node_count: usize,
    #[serde(rename = "c_T")]
    pub coalescence_time: usize,
    #[serde(rename = "d_T")]
    pub distance_to_mrca: usize,
    #[serde(rename = "m_T")]
    pub crown_size: usize,
    pub adjusted: f64,
}

/// Statistics after step `t` of one run (the `--per-step` stream).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeStepRow {
    pub model: String,
    pub scheme: ResamplingScheme,
    #[serde(rename = "N")]
    pub n: usize,
    pub replicate: usize,
    pub t: usize,
    #[serde(rename = "n_t")]
    pub node_count: usize,
    #[serde(rename = "c_t")]
    pub coalescence_time: usize,
    #[serde(rename = "d_t")]
    pub distance_to_mrca: usize,
    #[serde(rename = "m_t")]
    pub crown_size: usize,
    pub adjusted: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TreeStatsOutput {
    pub rows: Vec<TreeStatsRow>,
    /// Empty unless `per_step` is set.
    pub steps: Vec<TreeStepRow>,
}

struct Job {
    scheme: ResamplingScheme,
    n: usize,
    replicate: usize,
}

/// Each run goes to the largest `T` once; smaller horizons are read off
/// along the way, which is exact because both the data and the filter use
/// one random stream per step.
pub fn tree_stats(config: &ExperimentConfig) -> Result<TreeStatsOutput, ExperimentError> {
    config.validate()?;
    with_model!(config, |model| sweep(model, config))
}

fn sweep<M: StateSpaceModel>(model: &M, config: &ExperimentConfig) -> Result<TreeStatsOutput, ExperimentError> {
    let horizon = config.max_horizon();
    let jobs: Vec<Job> = config
        .schemes
        .iter()
        .flat_map(|&scheme| {
            config.n.iter().flat_map(move |&n| {
                (0..config.replicates).map(move |replicate| Job { scheme, n, replicate })
            })
        })
        .collect();

    let results: Vec<(Vec<TreeStats>, Vec<TreeStats>)> = in_pool(config.workers, || {
        jobs.par_iter()
            .map(|job| run_job(model, config, horizon, job))
            .collect::<Result<Vec<_>, ExperimentError>>()
    })??;

    let mut out = TreeStatsOutput::default();
    let name = model.name().to_string();
    let per_replicate = config.replicates;
    let per_scheme = config.n.len() * per_replicate;
    for (si, &scheme) in config.schemes.iter().enumerate() {
        for (ni, &n) in config.n.iter().enumerate() {
            let base = si * per_scheme + ni * per_replicate;
            for (ti, &t) in config.t.iter().enumerate() {
                for replicate in 0..per_replicate {
                    let s = &results[base + replicate].0[ti];
                    out.rows.push(TreeStatsRow {
                        model: name.clone(),
                        scheme,
                        n,
                        t,
                        replicate,
                        node_count: s.node_count,
                        coalescence_time: s.coalescence_time,
                        distance_to_mrca: s.distance_to_mrca,
                        crown_size: s.crown_size,
                        adjusted: s.adjusted_nodes,
                    });
                }
            }
            for replicate in 0..per_replicate {
                for (t, s) in results[base + replicate].1.iter().enumerate() {
                    out.steps.push(TreeStepRow {
                        model: name.clone(),
                        scheme,
                        n,
                        replicate,
                        t,
                        node_count: s.node_count,
                        coalescence_time: s.coalescence_time,
                        distance_to_mrca: s.distance_to_mrca,
                        crown_size: s.crown_size,
                        adjusted: s.adjusted_nodes,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Returns the statistics at each configured horizon (in config order) and,
/// with `per_step`, after every step.
fn run_job<M: StateSpaceModel>(
    model: &M,
    config: &ExperimentConfig,
    horizon: usize,
    job: &Job,
) -> Result<(Vec<TreeStats>, Vec<TreeStats>), ExperimentError> {
    let seed = config.seed + job.replicate as u64;
    let data = generate_synthetic(model, horizon, seed)?;
    let mut at_horizon: Vec<Option<TreeStats>> = vec![None; config.t.len()];
    let mut steps = Vec::new();
    run_filter_with(
        model,
        &data.observations,
        job.n,
        job.scheme,
        seed,
        config.capacity,
        |view| {
            let t = view.system.time;
            let wanted = config.t.contains(&t);
            if !wanted && !config.per_step {
                return;
            }
            let stats = view.tree.stats();
            for (slot, &h) in at_horizon.iter_mut().zip(&config.t) {
                if h == t {
                    *slot = Some(stats.clone());
                }
            }
            if config.per_step {
                steps.push(stats);
            }
        },
    )?;
    let at_horizon = at_horizon
        .into_iter()
        .map(|s| s.expect("every horizon is reached"))
        .collect();
    Ok((at_horizon, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::ModelKind;

    #[test]
    fn single_particle_single_row() {
        let config = ExperimentConfig {
            model: ModelKind::Neutral,
            n: vec![1],
            t: vec![10],
            replicates: 1,
            ..ExperimentConfig::default()
        };
        let out = tree_stats(&config).unwrap();
        assert_eq!(out.rows.len(), 1);
        let r = &out.rows[0];
        assert_eq!((r.node_count, r.coalescence_time, r.distance_to_mrca, r.crown_size), (11, 10, 0, 1));
        assert_eq!(r.adjusted, 1.0);
        assert!(out.steps.is_empty());
    }

    #[test]
    fn rows_are_ordered_and_prefix_consistent() {
        let config = ExperimentConfig {
            model: ModelKind::Pz,
            n: vec![8, 4],
            t: vec![12, 5],
            schemes: vec![ResamplingScheme::Systematic, ResamplingScheme::Multinomial],
            replicates: 2,
            substeps: 10,
            per_step: true,
            workers: Some(3),
            ..ExperimentConfig::default()
        };
        let out = tree_stats(&config).unwrap();
        let keys: Vec<_> = out.rows.iter().map(|r| (r.scheme, r.n, r.t, r.replicate)).collect();
        let mut expected = Vec::new();
        for s in &config.schemes {
            for n in &config.n {
                for t in &config.t {
                    for r in 0..2 {
                        expected.push((*s, *n, *t, r));
                    }
                }
            }
        }
        assert_eq!(keys, expected);
        // The T = 5 rows agree with the per-step stream at t = 5.
        for row in out.rows.iter().filter(|r| r.t == 5) {
            let step = out
                .steps
                .iter()
                .find(|s| s.scheme == row.scheme && s.n == row.n && s.replicate == row.replicate && s.t == 5)
                .unwrap();
            assert_eq!(
                (step.node_count, step.coalescence_time, step.adjusted),
                (row.node_count, row.coalescence_time, row.adjusted)
            );
        }
        // Same answer with a different number of workers.
        let serial = tree_stats(&ExperimentConfig {
            workers: Some(1),
            ..config.clone()
        })
        .unwrap();
        assert_eq!(serial, out);
    }
}
