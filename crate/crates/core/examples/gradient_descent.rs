//! Soft partitions optimised by gradient ascent on a relaxed EI, then
//! hardened.

use netscale::graph::Network;
use netscale::search::{gradient_search_report, GradConfig};

fn main() -> netscale::error::Result<()> {
    // a noisy four-node clique next to a node that holds still
    let mut edges: Vec<(usize, usize, f64)> = (0..16).map(|k| (k / 4, k % 4, 0.25)).collect();
    edges.push((4, 4, 1.0));
    let net = Network::from_edges(5, edges)?;
    let cfg = GradConfig {
        restarts: 4,
        seed: 9,
        ..GradConfig::default()
    };
    let report = gradient_search_report(&net, &cfg)?;
    for (i, g) in report.restart_gains.iter().enumerate() {
        match g {
            Some(g) => println!("restart {i}: emergence {g:.4}"),
            None => println!("restart {i}: aborted"),
        }
    }
    let r = &report.result;
    println!("best: {:?}\n{} macro-nodes, emergence {:.4}", r.partition.groups(), r.macro_node_count(), r.causal_emergence);
    Ok(())
}
