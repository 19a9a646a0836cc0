//! Greedy merging within Markov blankets, printing each accepted merge.

use netscale::netgen::{preferential_attachment, PAConfig};
use netscale::search::greedy::greedy_search_traced;
use netscale::search::{GreedyConfig, NodeOrder};

fn main() -> netscale::error::Result<()> {
    let net = preferential_attachment(&PAConfig::new(40, 1, 2.0, 3))?;
    let cfg = GreedyConfig {
        node_order: NodeOrder::AscendingId,
        ..GreedyConfig::default()
    };
    let (r, merges) = greedy_search_traced(&net, &cfg)?;
    for m in &merges {
        println!(
            "node {:>2} joins group of {:>2}: {:.4} -> {:.4}",
            m.target, m.seed, m.ei_before, m.ei_after
        );
    }
    println!(
        "{} nodes -> {} macro-nodes, emergence {:.4} bits",
        net.len(),
        r.macro_node_count(),
        r.causal_emergence
    );
    Ok(())
}
