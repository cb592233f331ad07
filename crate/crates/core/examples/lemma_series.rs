//! The deterministic majorant sequence and its normalized excess.
//!
//!     cargo run --release --example lemma_series

use smc_ancestry::theory::{g_n_eps, u_sequence, u_series_sum};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = u_sequence(20, 0.5, 1e-6)?;
    let head: Vec<String> = s.values.iter().take(10).map(|u| format!("{u:.3}")).collect();
    println!("N = 20, eps = 0.5: u = {} ... ({} terms)", head.join(", "), s.values.len());
    println!("g(20) = {:.4}", g_n_eps(20, 0.5, 20.0)?);

    println!("\nN,epsilon,steps,sum,ratio");
    for eps in [0.3, 0.5, 1.0] {
        for n in [10usize, 100, 1000, 10_000] {
            let s = u_series_sum(n, eps, 1e-12)?;
            let nf = n as f64;
            println!("{n},{eps},{},{:.2},{:.4}", s.steps, s.total(), s.total() / (nf * nf.ln()));
        }
    }
    Ok(())
}
