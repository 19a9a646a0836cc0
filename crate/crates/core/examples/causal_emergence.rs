//! Grouping a noisy clique into a single macro-node turns four nodes of pure
//! noise into one deterministic state.

use netscale::coarse::{causal_emergence, Partition};
use netscale::graph::Network;

fn main() -> netscale::error::Result<()> {
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            edges.push((i, j, 0.25));
        }
    }
    edges.push((4, 4, 1.0));
    let net = Network::from_edges(5, edges)?;

    let part = Partition::from_groups(5, &[vec![0, 1, 2, 3], vec![4]])?;
    let r = causal_emergence(&net, &part)?;
    println!("micro EI  {:.4} bits", r.ei_micro);
    println!("macro EI  {:.4} bits", r.ei_macro);
    println!("emergence {:.4} bits, accuracy {:.3}", r.causal_emergence, r.accuracy);
    for i in 0..r.macro_net.len() {
        println!("  macro row {i}: {:?}", r.macro_net.row(i));
    }
    Ok(())
}
