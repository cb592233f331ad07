//! Synthetic datasets and their CSV form.
//!
//! CSV layout: header `t,y[,diagnostic columns...]`, one row per time
//! `t = 1..=T`. Diagnostic columns hold the hidden state at `t` (for the PZ
//! model `P,Z,alpha`) and are ignored when reading.

use std::io::{Read, Write};

use super::{ModelError, PzState, StateSpaceModel};
use crate::rng::{stream_rng, Domain};

/// Hidden-state columns written next to each observation.
pub trait Diagnostics {
    fn column_names() -> &'static [&'static str];
    fn values(&self) -> Vec<f64>;
}

impl Diagnostics for PzState {
    fn column_names() -> &'static [&'static str] {
        &["P", "Z", "alpha"]
    }

    fn values(&self) -> Vec<f64> {
        vec![self.p, self.z, self.alpha]
    }
}

impl Diagnostics for f64 {
    fn column_names() -> &'static [&'static str] {
        &["x"]
    }

    fn values(&self) -> Vec<f64> {
        vec![*self]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData<S, O> {
    /// `x_0, ..., x_T`.
    pub hidden: Vec<S>,
    /// `y_1, ..., y_T`.
    pub observations: Vec<O>,
}

impl<S: Diagnostics> SyntheticData<S, f64> {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), ModelError> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["t".to_string(), "y".to_string()];
        header.extend(S::column_names().iter().map(|s| s.to_string()));
        w.write_record(&header)?;
        for (i, y) in self.observations.iter().enumerate() {
            let mut row = vec![(i + 1).to_string(), y.to_string()];
            row.extend(self.hidden[i + 1].values().iter().map(f64::to_string));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Reads the `y` column of a dataset CSV, checking that `t` runs 1, 2, ...
pub fn read_observations_csv<R: Read>(reader: R) -> Result<Vec<f64>, ModelError> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ModelError::Dataset(format!("missing column `{name}`")))
    };
    let (t_col, y_col) = (col("t")?, col("y")?);
    let mut ys = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |c: usize| -> Result<f64, ModelError> {
            rec.get(c)
                .unwrap_or("")
                .trim()
                .parse::<f64>()
                .map_err(|e| ModelError::Dataset(format!("row {}: {e}", i + 1)))
        };
        let t = parse(t_col)?;
        if t != (i + 1) as f64 {
            return Err(ModelError::Dataset(format!(
                "row {} has t={t}, expected {}",
                i + 1,
                i + 1
            )));
        }
        ys.push(parse(y_col)?);
    }
    Ok(ys)
}

/// Simulates `x_0..x_T` and `y_1..y_T`. Step `t` draws from its own random
/// stream, so a shorter dataset is a prefix of a longer one with the same
/// seed.
pub fn generate_synthetic<M: StateSpaceModel>(
    model: &M,
    horizon: usize,
    seed: u64,
) -> Result<SyntheticData<M::State, M::Obs>, ModelError> {
    let mut rng = stream_rng(seed, Domain::Data, 0);
    let mut hidden = Vec::with_capacity(horizon + 1);
    let mut observations = Vec::with_capacity(horizon);
    hidden.push(model.sample_initial(&mut rng));
    for t in 1..=horizon {
        let mut rng = stream_rng(seed, Domain::Data, t as u64);
        let next = model.sample_transition(&mut rng, &hidden[t - 1])?;
        observations.push(model.sample_obs(&mut rng, &next));
        hidden.push(next);
    }
    Ok(SyntheticData {
        hidden,
        observations,
    })
}
