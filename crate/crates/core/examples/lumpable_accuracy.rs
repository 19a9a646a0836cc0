//! Accuracy measures how well the macro walk tracks the projected micro walk.
//! Grouping nodes with identical rows is lossless; other groupings drift.

use netscale::coarse::{accuracy, Partition, DEFAULT_HORIZON};
use netscale::graph::Network;

fn main() -> netscale::error::Result<()> {
    // nodes 0 and 1 behave identically; 2 and 3 do not
    let net = Network::from_rows(&[
        vec![0.0, 0.0, 0.5, 0.5],
        vec![0.0, 0.0, 0.5, 0.5],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
    ])?;
    for groups in [vec![vec![0, 1], vec![2], vec![3]], vec![vec![0], vec![1], vec![2, 3]]] {
        let part = Partition::from_groups(4, &groups)?;
        println!("{groups:?}: accuracy {:.4}", accuracy(&net, &part, DEFAULT_HORIZON)?);
    }
    Ok(())
}
