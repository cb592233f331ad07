//! The three resampling schemes on one weight vector.
//!
//!     cargo run --example resampling

use smc_ancestry::rng::{stream_rng, Domain};
use smc_ancestry::smc::{offspring_counts, resample, ResamplingScheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let weights = [0.05, 0.4, 0.0, 0.15, 0.3, 0.1];
    println!("weights       {weights:?}");
    for scheme in ResamplingScheme::ALL {
        let mut rng = stream_rng(7, Domain::Filter, 0);
        let ancestors = resample(&weights, scheme, &mut rng)?;
        let counts = offspring_counts(&ancestors, weights.len())?;
        println!("{scheme:<13} ancestors {ancestors:?} offspring {counts:?}");
    }

    // Spread of the offspring count of particle 2 (expected N w = 2.4).
    for scheme in ResamplingScheme::ALL {
        let draws = 20_000;
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for d in 0..draws {
            let mut rng = stream_rng(8, Domain::Filter, d);
            let c = offspring_counts(&resample(&weights, scheme, &mut rng)?, weights.len())?[1] as f64;
            sum += c;
            sum_sq += c * c;
        }
        let mean = sum / draws as f64;
        println!("{scheme:<13} particle 2: mean {mean:.3}, variance {:.3}", sum_sq / draws as f64 - mean * mean);
    }
    Ok(())
}
