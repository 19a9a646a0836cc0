//! Network generators and how preferential attachment concentrates degree.

use netscale::metrics::undirected_degrees;
use netscale::netgen::{erdos_renyi, preferential_attachment, preferential_attachment_edges, PAConfig};

fn main() -> netscale::error::Result<()> {
    for alpha in [0.0, 1.0, 2.0, 3.0] {
        let net = preferential_attachment(&PAConfig::new(200, 1, alpha, 7))?;
        let deg = undirected_degrees(&net);
        let max = deg.iter().max().copied().unwrap_or(0);
        println!("PA alpha {alpha}: {} edges, max degree {max}", net.edge_count() / 2);
    }
    let edges = preferential_attachment_edges(&PAConfig::new(6, 2, 1.0, 0))?;
    println!("first edges of a 6-node m=2 tree: {:?}", &edges[..4]);
    let er = erdos_renyi(50, 0.1, 3)?;
    println!("ER(50, 0.1): {} directed edges", er.edge_count());
    Ok(())
}
