//! Per-step prune + insert time against t and N.
//!
//!     cargo run --release --example step_timing

use smc_ancestry::experiments::{bench, ExperimentConfig, ModelKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ExperimentConfig {
        model: ModelKind::Neutral,
        n: vec![256, 1024, 4096],
        t: vec![500],
        replicates: 2,
        bucket: Some(100),
        ..ExperimentConfig::default()
    };
    println!("N,bucket,mean_us");
    for row in bench(&config)? {
        println!("{},{}-{},{:.2}", row.n, row.bucket_start, row.bucket_end, row.mean_us);
    }
    Ok(())
}
