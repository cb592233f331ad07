//! Tables for the `theory` subcommands.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{in_pool, usage, ExperimentConfig, ExperimentError};
use crate::rng::{stream_rng, Domain};
use crate::smc::ResamplingScheme;
use crate::theory::{
    expected_coalescence_bound, simulate_coupled, u_series_sum, verify_bounds, ChainLaws, ChainParams,
};

/// Entry `P(K_{k+1} = p | K_k = q)` of the transition matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub epsilon: f64,
    pub q: usize,
    pub p: usize,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub quantity: String,
    pub scheme: ResamplingScheme,
    #[serde(rename = "N")]
    pub n: usize,
    pub epsilon: f64,
    #[serde(rename = "T")]
    pub t: usize,
    pub mean: f64,
    pub stderr: f64,
    /// Empty when no analytic bound applies.
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Row {
    #[serde(rename = "N")]
    pub n: usize,
    pub epsilon: f64,
    pub steps: usize,
    /// `sum (u_k - 1)`, including the bound on the truncated tail.
    pub sum: f64,
    /// `sum / (N ln N)`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub epsilon: f64,
    pub trajectories: usize,
    /// Trajectories with `L >= K` at every step.
    pub dominated: usize,
    pub mean_k_hit: f64,
    pub mean_l_hit: f64,
    /// Closed-form `E[hitting time of L]`.
    pub expected_l_hit: f64,
}

const LEMMA1_TOL: f64 = 1e-12;

fn params(n: usize, eps: f64) -> Result<ChainParams, ExperimentError> {
    ChainParams::new(n, eps).map_err(|e| usage(e.to_string()))
}

/// K-chain transition rows for every `N`, `epsilon` and requested `q`.
pub fn laws_table(config: &ExperimentConfig) -> Result<Vec<LawRow>, ExperimentError> {
    config.validate()?;
    let mut rows = Vec::new();
    for &n in &config.n {
        for &eps in &config.eps {
            let laws = ChainLaws::new(params(n, eps)?);
            let qs: Vec<usize> = config.q.clone().unwrap_or_else(|| (1..=n).collect());
            for q in qs {
                if q == 0 || q > n {
                    return Err(usage(format!("q = {q} outside 1..={n}")));
                }
                let row = laws.k_row(q)?;
                rows.extend(row.probs.iter().enumerate().map(|(i, &prob)| LawRow {
                    n,
                    epsilon: eps,
                    q,
                    p: i + 1,
                    prob,
                }));
            }
        }
    }
    Ok(rows)
}

/// Tree-size statistics against their bounds, one block per
/// `(scheme, N, epsilon, T)`.
pub fn bounds_table(config: &ExperimentConfig) -> Result<Vec<BoundsRow>, ExperimentError> {
    config.validate()?;
    let mut rows = Vec::new();
    for &scheme in &config.schemes {
        for &n in &config.n {
            for &eps in &config.eps {
                let p = params(n, eps)?;
                for &t in &config.t {
                    let report = in_pool(config.workers, || {
                        with_model!(config, |model| verify_bounds(
                            model,
                            p,
                            t,
                            config.replicates,
                            scheme,
                            config.seed
                        ))
                    })??;
                    rows.extend(report.entries.iter().map(|e| BoundsRow {
                        quantity: e.quantity.name().to_string(),
                        scheme,
                        n,
                        epsilon: eps,
                        t,
                        mean: e.mean,
                        stderr: e.stderr,
                        bound: e.bound,
                    }));
                }
            }
        }
    }
    Ok(rows)
}

/// `sum (u_k - 1) / (N ln N)` for every `epsilon` and `N`.
pub fn lemma1_table(config: &ExperimentConfig) -> Result<Vec<Lemma1Row>, ExperimentError> {
    config.validate()?;
    let mut rows = Vec::new();
    for &eps in &config.eps {
        for &n in &config.n {
            let s = u_series_sum(n, eps, LEMMA1_TOL).map_err(|e| usage(e.to_string()))?;
            let nf = n as f64;
            rows.push(Lemma1Row {
                n,
                epsilon: eps,
                steps: s.steps,
                sum: s.total(),
                ratio: s.total() / (nf * nf.ln()),
            });
        }
    }
    Ok(rows)
}

/// Simulates `replicates` coupled `(K, L)` trajectories per `(N, epsilon)`.
/// Trajectory `i` draws from theory stream `i` of the seed.
pub fn coupling_table(config: &ExperimentConfig) -> Result<Vec<CouplingRow>, ExperimentError> {
    config.validate()?;
    let mut rows = Vec::new();
    for &n in &config.n {
        for &eps in &config.eps {
            let p = params(n, eps)?;
            let expected_l_hit = if n == 1 { 0.0 } else { expected_coalescence_bound(p)? };
            let paths = in_pool(config.workers, || {
                (0..config.replicates)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = stream_rng(config.seed, Domain::Theory, i as u64);
                        simulate_coupled(p, &mut rng)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })??;
            let k_hit = |k: &[usize]| k.iter().position(|&x| x == 1).unwrap_or(k.len() - 1) as f64;
            let reps = config.replicates as f64;
            rows.push(CouplingRow {
                n,
                epsilon: eps,
                trajectories: config.replicates,
                dominated: paths.iter().filter(|c| c.dominated()).count(),
                mean_k_hit: paths.iter().map(|c| k_hit(&c.k)).sum::<f64>() / reps,
                mean_l_hit: paths.iter().map(|c| (c.l.len() - 1) as f64).sum::<f64>() / reps,
                expected_l_hit,
            });
        }
    }
    Ok(rows)
}
