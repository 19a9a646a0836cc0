//! Effective information of a few textbook networks, split into determinism
//! and degeneracy.

use netscale::ei::effective_information;
use netscale::graph::Network;
use netscale::netgen::{complete, cycle, star};

fn show(name: &str, net: &Network) {
    let b = effective_information(net);
    println!(
        "{name:<12} ei {:.4}  determinism {:.4}  degeneracy {:.4}  indeterminism {:.4}",
        b.ei, b.determinism, b.degeneracy, b.indeterminism
    );
}

fn main() -> netscale::error::Result<()> {
    // every node points to the next: perfectly deterministic, no degeneracy
    show("cycle(8)", &Network::from_edges(8, (0..8).map(|i| (i, (i + 1) % 8, 1.0)))?);
    // an undirected cycle is a fair coin flip at each step
    show("ring(8)", &cycle(8)?.normalize());
    show("complete(4)", &complete(4)?.normalize());
    show("star(10)", &star(10)?.normalize());

    // four nodes funnelling into one sink: all determinism, all degeneracy
    let funnel = Network::from_edges(5, (0..5).map(|i| (i, 4, 1.0)))?;
    show("funnel(5)", &funnel);
    Ok(())
}
