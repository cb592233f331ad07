//! Filter a synthetic plankton dataset and watch the genealogy stay small.
//!
//!     cargo run --release --example bootstrap_filter -- [N] [T] [seed]

use smc_ancestry::models::{generate_synthetic, PzModel};
use smc_ancestry::smc::run_filter_with;
use smc_ancestry::tree::CapacityPolicy;
use smc_ancestry::ResamplingScheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let n = args.first().copied().unwrap_or(512) as usize;
    let horizon = args.get(1).copied().unwrap_or(300) as usize;
    let seed = args.get(2).copied().unwrap_or(1);

    let model = PzModel::default();
    let data = generate_synthetic(&model, horizon, seed)?;
    println!("t,true_P,filtered_P,n_t,d_t,adjusted,capacity");
    let (_, tree) = run_filter_with(
        &model,
        &data.observations,
        n,
        ResamplingScheme::Multinomial,
        seed,
        CapacityPolicy::default(),
        |view| {
            let t = view.system.time;
            if t % 25 == 0 {
                let s = view.tree.stats();
                println!(
                    "{t},{:.4},{:.4},{},{},{:.3},{}",
                    data.hidden[t].p,
                    view.system.weighted_mean(|x| x.p),
                    s.node_count,
                    s.distance_to_mrca,
                    s.adjusted_nodes,
                    view.tree.capacity()
                );
            }
        },
    )?;
    let full = (horizon + 1) * n;
    println!(
        "# stored {} nodes instead of {full} ({:.1}%), {} enlargements",
        tree.node_count(),
        100.0 * tree.node_count() as f64 / full as f64,
        tree.enlargements()
    );
    Ok(())
}
