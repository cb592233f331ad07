//! Write a synthetic plankton dataset as CSV (t, y, P, Z, alpha).
//!
//!     cargo run --release --example pz_dataset -- [T] [seed] > data.csv

use smc_ancestry::models::{generate_synthetic, PzModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let horizon: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(100);
    let seed: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(1);
    let data = generate_synthetic(&PzModel::default(), horizon, seed)?;
    data.write_csv(std::io::stdout().lock())?;
    Ok(())
}
