//! Synthetic datasets and filtering a dataset read from disk.

use std::fs::File;
use std::io::{BufReader, Write};

use serde::Serialize;

use super::{usage, ExperimentConfig, ExperimentError, ModelKind};
use crate::models::{generate_synthetic, ModelError, read_observations_csv, Diagnostics, StateSpaceModel};
use crate::smc::run_filter_with;

/// Writes a dataset of length `max(T)` drawn with `seed`.
///
/// Columns: `t,y` followed by the hidden state (`P,Z,alpha` for the PZ
/// model, `x` for the linear-Gaussian one).
pub fn generate_data<W: Write>(config: &ExperimentConfig, writer: W) -> Result<(), ExperimentError> {
    config.validate()?;
    let horizon = config.max_horizon();
    match config.model {
        ModelKind::Pz => generate_synthetic(&config.pz_model(), horizon, config.seed)?.write_csv(writer)?,
        ModelKind::LinearGaussian => {
            generate_synthetic(&config.linear_gaussian(), horizon, config.seed)?.write_csv(writer)?
        }
        ModelKind::Neutral => return Err(usage("the neutral model has no observations to write")),
    }
    Ok(())
}

/// Filter output after each step `t = 0..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterRow {
    pub t: usize,
    /// Weighted means of the state columns.
    pub means: Vec<f64>,
    /// Effective sample size `1 / sum w^2`.
    pub ess: f64,
    pub node_count: usize,
    pub coalescence_time: usize,
    pub distance_to_mrca: usize,
    pub crown_size: usize,
    pub adjusted: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutput {
    /// Names of the state columns, e.g. `P,Z,alpha`.
    pub state_columns: Vec<String>,
    pub rows: Vec<FilterRow>,
    /// Final tree as JSON when `dump_tree` is set.
    pub tree_json: Option<String>,
}

impl FilterOutput {
    /// CSV with columns `t,mean_<state>...,ess,n_t,c_t,d_t,m_t,adjusted`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), ExperimentError> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["t".to_string()];
        header.extend(self.state_columns.iter().map(|c| format!("mean_{c}")));
        header.extend(["ess", "n_t", "c_t", "d_t", "m_t", "adjusted"].map(String::from));
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.t.to_string()];
            rec.extend(r.means.iter().map(f64::to_string));
            rec.extend([
                r.ess.to_string(),
                r.node_count.to_string(),
                r.coalescence_time.to_string(),
                r.distance_to_mrca.to_string(),
                r.crown_size.to_string(),
                r.adjusted.to_string(),
            ]);
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs the filter (first `N`, first scheme, `seed`) over the `y` column of
/// `config.dataset`.
pub fn filter_dataset(config: &ExperimentConfig) -> Result<FilterOutput, ExperimentError> {
    config.validate()?;
    let path = config
        .dataset
        .as_ref()
        .ok_or_else(|| usage("filter needs --dataset <CSV>"))?;
    let file = File::open(path)
        .map_err(|e| ModelError::Dataset(format!("{}: {e}", path.display())))?;
    let ys = read_observations_csv(BufReader::new(file))?;
    match config.model {
        ModelKind::Pz => run_on(&config.pz_model(), &ys, config),
        ModelKind::LinearGaussian => run_on(&config.linear_gaussian(), &ys, config),
        ModelKind::Neutral => Err(usage("the neutral model cannot filter observed data")),
    }
}

fn run_on<M>(model: &M, ys: &[f64], config: &ExperimentConfig) -> Result<FilterOutput, ExperimentError>
where
    M: StateSpaceModel<Obs = f64>,
    M::State: Diagnostics + Serialize,
{
    let columns = M::State::column_names();
    let mut rows = Vec::with_capacity(ys.len() + 1);
    let (_, tree) = run_filter_with(
        model,
        ys,
        config.n[0],
        config.schemes[0],
        config.seed,
        config.capacity,
        |view| {
            let sys = view.system;
            let means = (0..columns.len())
                .map(|c| sys.weighted_mean(|s| s.values()[c]))
                .collect();
            let ess = 1.0 / sys.norm_weights.iter().map(|w| w * w).sum::<f64>();
            let s = view.tree.stats();
            rows.push(FilterRow {
                t: sys.time,
                means,
                ess,
                node_count: s.node_count,
                coalescence_time: s.coalescence_time,
                distance_to_mrca: s.distance_to_mrca,
                crown_size: s.crown_size,
                adjusted: s.adjusted_nodes,
            });
        },
    )?;
    let tree_json = match config.dump_tree {
        Some(_) => Some(tree.to_json()?),
        None => None,
    };
    Ok(FilterOutput {
        state_columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
        tree_json,
    })
}
