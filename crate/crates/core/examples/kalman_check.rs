//! The bootstrap filter against the exact Kalman filter.
//!
//!     cargo run --release --example kalman_check -- [N]

use smc_ancestry::models::{generate_synthetic, kalman_filter, LinearGaussian};
use smc_ancestry::smc::run_filter_with;
use smc_ancestry::tree::CapacityPolicy;
use smc_ancestry::ResamplingScheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(5000);
    let model = LinearGaussian::default();
    let data = generate_synthetic(&model, 30, 3)?;
    let kalman = kalman_filter(&model, &data.observations);

    let mut means = Vec::new();
    let (_, tree) = run_filter_with(
        &model,
        &data.observations,
        n,
        ResamplingScheme::Systematic,
        3,
        CapacityPolicy::default(),
        |v| means.push(v.system.weighted_mean(|x| *x)),
    )?;
    println!("t,kalman_mean,filter_mean,kalman_sd");
    for (t, k) in kalman.iter().enumerate() {
        println!("{},{:.4},{:.4},{:.4}", t + 1, k.mean, means[t + 1], k.var.sqrt());
    }
    let path = tree.extract_path(1)?;
    println!("# stored nodes at T: {} for N = {n}", tree.node_count());
    println!("# first states on the path of particle 1: {:?}", &path[..5]);
    Ok(())
}
