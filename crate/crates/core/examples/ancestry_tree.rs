//! Drive the ancestry store by hand: prune, insert, read paths and
//! statistics, and dump the slot layout as JSON.
//!
//!     cargo run --example ancestry_tree

use smc_ancestry::tree::AncestryStore;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Four particles at time 0, in a buffer of eight slots.
    let mut tree = AncestryStore::init(vec!["a0", "b0", "c0", "d0"], 8)?;

    // Time 1: particles 1 and 3 each leave two children.
    tree.prune(&[2, 0, 2, 0])?;
    tree.insert(vec!["a1", "a1'", "c1", "c1'"], &[1, 1, 3, 3])?;

    // Time 2: everything descends from the first child of particle 1.
    tree.prune(&[4, 0, 0, 0])?;
    tree.insert(vec!["w2", "x2", "y2", "z2"], &[1, 1, 1, 1])?;

    for k in 1..=tree.particles() {
        println!("path {k}: {:?}", tree.extract_path(k)?);
    }
    let stats = tree.stats();
    println!(
        "n_T = {}, c_T = {}, d_T = {}, m_T = {}, adjusted = {}",
        stats.node_count, stats.coalescence_time, stats.distance_to_mrca, stats.crown_size, stats.adjusted_nodes
    );
    println!("{}", tree.to_json()?);
    Ok(())
}
