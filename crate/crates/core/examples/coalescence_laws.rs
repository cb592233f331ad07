//! Transition laws of the ancestor-count chains, the dominating chain's
//! expected hitting time, and a coupled simulation.
//!
//!     cargo run --release --example coalescence_laws -- [N] [eps]

use smc_ancestry::rng::{stream_rng, Domain};
use smc_ancestry::theory::{
    expected_coalescence_bound, simulate_coupled, simulate_l_hitting_many, ChainLaws, ChainParams,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(8);
    let eps: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.5);
    let params = ChainParams::new(n, eps)?;
    let laws = ChainLaws::new(params);

    println!("K-chain rows (N = {n}, eps = {eps}); entry p is P(next = p | now = q)");
    for q in 1..=n.min(8) {
        let row = laws.k_row(q)?;
        let probs: Vec<String> = row.probs.iter().map(|p| format!("{p:.4}")).collect();
        println!("  q = {q}: [{}]  mean {:.3}", probs.join(", "), row.mean());
    }
    println!("Z-chain (uniform weights), q = N: mean of next count {:.4}", laws.z_row(n)?.mean());

    if n >= 2 && eps > 0.0 {
        let expected = expected_coalescence_bound(params)?;
        let mut rng = stream_rng(1, Domain::Theory, 0);
        let sims = simulate_l_hitting_many(params, 20_000, &mut rng)?;
        let mean = sims.iter().sum::<usize>() as f64 / sims.len() as f64;
        println!("E[hitting time of L]: closed form {expected:.2}, simulated {mean:.2}");
        println!("Theorem-style bound (1 + 8/eps) N ln N = {:.1}", params.delta1() * n as f64 * (n as f64).ln());

        let mut rng = stream_rng(2, Domain::Theory, 0);
        let path = simulate_coupled(params, &mut rng)?;
        println!("one coupled trajectory, L >= K throughout: {}", path.dominated());
        println!("  K: {:?}", &path.k[..path.k.len().min(20)]);
        println!("  L: {:?}", &path.l[..path.l.len().min(20)]);
    }
    Ok(())
}
