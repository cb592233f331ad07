//! Reproducible experiment drivers behind the command-line front end.
//!
//! Every driver takes an [`ExperimentConfig`], returns typed rows, and can
//! write them as CSV (header row, UTF-8, `.` decimal separator). Replicate
//! `r` always uses seed `seed + r` for both its synthetic dataset and its
//! filter, and rows come back ordered by `(scheme, N, T, replicate)`
//! whatever the number of workers.

/// Binds `$m` to the configured model and evaluates `$body` with it.
macro_rules! with_model {
    ($cfg:expr, |$m:ident| $body:expr) => {
        match $cfg.model {
            $crate::experiments::ModelKind::Pz => {
                let $m = &$cfg.pz_model();
                $body
            }
            $crate::experiments::ModelKind::Neutral => {
                let $m = &$crate::models::Neutral;
                $body
            }
            $crate::experiments::ModelKind::LinearGaussian => {
                let $m = &$cfg.linear_gaussian();
                $body
            }
        }
    };
}

mod bench;
mod config;
mod data;
mod theory;
mod tree_stats;

pub use bench::{bench, BenchRow};
pub use config::{ExperimentConfig, ModelKind};
pub use data::{filter_dataset, generate_data, FilterOutput, FilterRow};
pub use theory::{bounds_table, coupling_table, lemma1_table, laws_table, BoundsRow, CouplingRow, LawRow, Lemma1Row};
pub use tree_stats::{tree_stats, TreeStatsOutput, TreeStatsRow, TreeStepRow};

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::models::ModelError;
use crate::smc::FilterError;
use crate::theory::TheoryError;
use crate::tree::TreeError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    /// Bad flags or configuration; the CLI exits with status 2.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl ExperimentError {
    pub fn is_usage(&self) -> bool {
        matches!(self, Self::Usage(_))
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Usage(msg.into())
}

/// Writes serializable rows as CSV with a header.
pub fn write_rows<W: Write, T: Serialize>(writer: W, rows: &[T]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Opens `path` for writing, or standard output when `path` is `None`.
pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, ExperimentError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Runs `f` inside a pool of `workers` threads (the global pool when
/// `None`).
pub(crate) fn in_pool<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, ExperimentError> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| ExperimentError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}
