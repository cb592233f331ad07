//! A small node-count sweep over N and T, written as CSV.
//!
//!     cargo run --release --example tree_stats_sweep > sweep.csv

use smc_ancestry::experiments::{tree_stats, write_rows, ExperimentConfig, ModelKind};
use smc_ancestry::ResamplingScheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ExperimentConfig {
        model: ModelKind::Pz,
        n: vec![64, 128, 256],
        t: vec![100, 200, 400],
        schemes: vec![ResamplingScheme::Multinomial, ResamplingScheme::Systematic],
        replicates: 5,
        seed: 11,
        ..ExperimentConfig::default()
    };
    let out = tree_stats(&config)?;
    write_rows(std::io::stdout().lock(), &out.rows)?;

    for &scheme in &config.schemes {
        for &n in &config.n {
            let adjusted: Vec<String> = config
                .t
                .iter()
                .map(|&t| {
                    let rows: Vec<f64> = out
                        .rows
                        .iter()
                        .filter(|r| r.scheme == scheme && r.n == n && r.t == t)
                        .map(|r| r.adjusted)
                        .collect();
                    format!("{:.2}", rows.iter().sum::<f64>() / rows.len() as f64)
                })
                .collect();
            eprintln!("{scheme} N={n}: mean adjusted nodes at T={:?}: {}", config.t, adjusted.join(", "));
        }
    }
    Ok(())
}
