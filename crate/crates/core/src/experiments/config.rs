use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{usage, ExperimentError};
use crate::models::{LinearGaussian, PzModel};
use crate::smc::ResamplingScheme;
use crate::tree::CapacityPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Phytoplankton-zooplankton model with log-normal observations.
    Pz,
    /// Equal weights at every step.
    Neutral,
    /// Scalar AR(1) state observed in Gaussian noise.
    LinearGaussian,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Pz => "pz",
            Self::Neutral => "neutral",
            Self::LinearGaussian => "linear-gaussian",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pz" => Ok(Self::Pz),
            "neutral" => Ok(Self::Neutral),
            "linear-gaussian" | "lg" => Ok(Self::LinearGaussian),
            other => Err(format!("unknown model `{other}` (pz, neutral, linear-gaussian)")),
        }
    }
}

/// Everything an experiment depends on. Together with `seed` it fully
/// determines every output except benchmark timings.
///
/// The JSON form uses the field names below; missing fields take their
/// defaults and unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    /// Particle counts.
    #[serde(alias = "N")]
    pub n: Vec<usize>,
    /// Horizons.
    #[serde(alias = "T")]
    pub t: Vec<usize>,
    pub schemes: Vec<ResamplingScheme>,
    /// Replicates per `(scheme, N)`; also the run or trajectory count of the
    /// theory tables.
    #[serde(alias = "runs")]
    pub replicates: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// RK4 substeps per unit of time for the PZ model.
    pub substeps: usize,
    pub capacity: CapacityPolicy,
    /// Worker threads; all cores when absent.
    pub workers: Option<usize>,
    /// Also emit statistics after every step.
    pub per_step: bool,
    /// Width of the benchmark's time buckets; `T / 10` when absent.
    pub bucket: Option<usize>,
    /// Weight lower bounds used by the theory tables.
    pub eps: Vec<f64>,
    /// Rows of the transition tables; all `1..=N` when absent.
    pub q: Option<Vec<usize>>,
    /// Input dataset of the `filter` command.
    pub dataset: Option<PathBuf>,
    /// Where `filter` writes the final tree as JSON.
    pub dump_tree: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Pz,
            n: vec![256],
            t: vec![1000],
            schemes: vec![ResamplingScheme::Multinomial],
            replicates: 10,
            seed: 1,
            out: None,
            substeps: 100,
            capacity: CapacityPolicy::default(),
            workers: None,
            per_step: false,
            bucket: None,
            eps: vec![1.0],
            q: None,
            dataset: None,
            dump_tree: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(text).map_err(|e| usage(format!("config: {e}")))
    }

    pub fn from_json_file(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks the fields shared by the simulation commands.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.n.is_empty() {
            return Err(usage("N list is empty"));
        }
        if self.n.contains(&0) {
            return Err(usage("N must be >= 1"));
        }
        if self.t.is_empty() {
            return Err(usage("T list is empty"));
        }
        if self.schemes.is_empty() {
            return Err(usage("scheme list is empty"));
        }
        if self.replicates == 0 {
            return Err(usage("replicates must be >= 1"));
        }
        if self.substeps == 0 {
            return Err(usage("substeps must be >= 1"));
        }
        if self.capacity.initial_multiple < 2 {
            return Err(usage("capacity initial_multiple must be >= 2"));
        }
        if !(self.capacity.growth_fraction >= 0.0 && self.capacity.growth_fraction.is_finite()) {
            return Err(usage("capacity growth_fraction must be a finite nonnegative number"));
        }
        if self.workers == Some(0) {
            return Err(usage("workers must be >= 1"));
        }
        if self.bucket == Some(0) {
            return Err(usage("bucket width must be >= 1"));
        }
        if self.eps.is_empty() {
            return Err(usage("eps list is empty"));
        }
        if let Some(e) = self.eps.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(usage(format!("eps must lie in [0, 1], got {e}")));
        }
        Ok(())
    }

    pub fn max_horizon(&self) -> usize {
        self.t.iter().copied().max().unwrap_or(0)
    }

    pub(crate) fn pz_model(&self) -> PzModel {
        PzModel {
            substeps: self.substeps,
            ..PzModel::default()
        }
    }

    pub(crate) fn linear_gaussian(&self) -> LinearGaussian {
        LinearGaussian::default()
    }
}
