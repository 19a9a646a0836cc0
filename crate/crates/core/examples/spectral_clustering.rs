//! Spectral search: embed nodes by eigenvectors, cluster with OPTICS, keep
//! the most informative candidate.

use netscale::coarse::causal_emergence;
use netscale::netgen::{preferential_attachment, PAConfig};
use netscale::search::{candidate_partitions, distances, embed, spectral_search, SpectralConfig};

fn main() -> netscale::error::Result<()> {
    let net = preferential_attachment(&PAConfig::new(60, 1, 2.0, 1))?;
    let cfg = SpectralConfig::default();

    let emb = embed(&net, cfg.zero_tol)?;
    println!("embedding: {} nodes x {} dimensions", emb.len(), emb.dim());
    let cands = candidate_partitions(&distances(&emb, &net)?, &cfg.optics)?;
    for c in &cands {
        let ce = causal_emergence(&net, c)?.causal_emergence;
        println!("  candidate with {:>2} groups: emergence {ce:.4}", c.group_count());
    }

    let best = spectral_search(&net, &cfg)?;
    println!(
        "chosen: {} groups, largest {}, emergence {:.4}",
        best.macro_node_count(),
        best.partition.largest_group_size(),
        best.causal_emergence
    );
    Ok(())
}
