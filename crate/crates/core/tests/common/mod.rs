//! Naive reference genealogy: keeps every generation's states and ancestor
//! indices and answers queries by walking backwards.

#![allow(dead_code)]

use std::collections::BTreeSet;

use smc_ancestry::models::{generate_synthetic, LinearGaussian};
use smc_ancestry::smc::run_filter_with;
use smc_ancestry::tree::CapacityPolicy;
use smc_ancestry::ResamplingScheme;

#[derive(Debug, Clone)]
pub struct NaiveGenealogy<S> {
    /// `states[t][k]` for `t = 0..=T`.
    pub states: Vec<Vec<S>>,
    /// `ancestors[t - 1][k]`, 1-based, for `t = 1..=T`.
    pub ancestors: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveStats {
    pub node_count: usize,
    pub coalescence_time: usize,
    pub distance_to_mrca: usize,
    pub crown_size: usize,
    pub adjusted_nodes: f64,
    pub survivors: Vec<usize>,
}

impl<S: Clone> NaiveGenealogy<S> {
    pub fn new(initial: Vec<S>) -> Self {
        Self {
            states: vec![initial],
            ancestors: Vec::new(),
        }
    }

    pub fn push(&mut self, states: Vec<S>, ancestors: Vec<usize>) {
        self.states.push(states);
        self.ancestors.push(ancestors);
    }

    pub fn time(&self) -> usize {
        self.ancestors.len()
    }

    pub fn particles(&self) -> usize {
        self.states[0].len()
    }

    /// States along the path of leaf `k` (1-based), oldest first.
    pub fn path(&self, k: usize) -> Vec<S> {
        let t_max = self.time();
        let mut idx = k;
        let mut path = vec![self.states[t_max][idx - 1].clone()];
        for t in (1..=t_max).rev() {
            idx = self.ancestors[t - 1][idx - 1];
            path.push(self.states[t - 1][idx - 1].clone());
        }
        path.reverse();
        path
    }

    /// Distinct ancestors of the current leaves in each generation.
    pub fn survivor_sets(&self) -> Vec<BTreeSet<usize>> {
        let t_max = self.time();
        let mut sets = vec![BTreeSet::new(); t_max + 1];
        sets[t_max] = (1..=self.particles()).collect();
        for t in (1..=t_max).rev() {
            sets[t - 1] = sets[t].iter().map(|&i| self.ancestors[t - 1][i - 1]).collect();
        }
        sets
    }

    pub fn stats(&self) -> NaiveStats {
        let t_max = self.time();
        let survivors: Vec<usize> = self.survivor_sets().iter().map(BTreeSet::len).collect();
        let node_count = survivors.iter().sum();
        // Largest s with a single ancestor in every generation up to s.
        let mut coalescence_time = 0;
        for s in 0..=t_max {
            if (0..=s).all(|u| survivors[u] == 1) {
                coalescence_time = s;
            }
        }
        NaiveStats {
            node_count,
            coalescence_time,
            distance_to_mrca: t_max - coalescence_time,
            crown_size: node_count - coalescence_time,
            adjusted_nodes: (node_count as f64 - t_max as f64) / self.particles() as f64,
            survivors,
        }
    }
}

/// Filters a linear-Gaussian dataset while mirroring every generation in a
/// [`NaiveGenealogy`], and after every step compares all paths and the tree
/// statistics. Returns the number of comparisons made.
pub fn check_against_oracle(
    particles: usize,
    horizon: usize,
    scheme: ResamplingScheme,
    seed: u64,
    policy: CapacityPolicy,
) -> Result<usize, String> {
    let model = LinearGaussian::default();
    let data = generate_synthetic(&model, horizon, seed).map_err(|e| e.to_string())?;
    let mut oracle: Option<NaiveGenealogy<f64>> = None;
    let mut checks = 0;
    let mut failure: Option<String> = None;
    run_filter_with(&model, &data.observations, particles, scheme, seed, policy, |view| {
        if failure.is_some() {
            return;
        }
        let sys = view.system;
        match oracle.as_mut() {
            None => oracle = Some(NaiveGenealogy::new(sys.states.clone())),
            Some(o) => o.push(sys.states.clone(), sys.ancestors.clone()),
        }
        let o = oracle.as_ref().unwrap();
        for k in 1..=particles {
            let got = view.tree.extract_path(k);
            let want = o.path(k);
            checks += 1;
            if !matches!(&got, Ok(p) if *p == want) {
                failure = Some(format!(
                    "N={particles} T={horizon} seed={seed} t={}: path {k} differs: {got:?} vs {want:?}",
                    sys.time
                ));
                return;
            }
        }
        let got = view.tree.stats();
        let want = o.stats();
        checks += 1;
        let same = got.node_count == want.node_count
            && got.coalescence_time == want.coalescence_time
            && got.distance_to_mrca == want.distance_to_mrca
            && got.crown_size == want.crown_size
            && got.adjusted_nodes == want.adjusted_nodes
            && got.survivors_per_generation == want.survivors;
        if !same {
            failure = Some(format!(
                "N={particles} T={horizon} seed={seed} t={}: stats differ: {got:?} vs {want:?}",
                sys.time
            ));
        }
        if let Err(e) = view.tree.validate() {
            failure = Some(format!("t={}: invalid tree: {e}", sys.time));
        }
    })
    .map_err(|e| e.to_string())?;
    match failure {
        Some(f) => Err(f),
        None => Ok(checks),
    }
}
