//! Seeded network generators. Every generator produces an undirected edge
//! set, symmetrizes it into a directed network and normalizes the rows.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Network;

/// Preferential attachment: each new node attaches `m` edges to existing
/// nodes with probability proportional to `degree^alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PAConfig {
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl PAConfig {
    pub fn new(n: usize, m: usize, alpha: f64, seed: u64) -> Self {
        Self { n, m, alpha, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::invalid("preferential attachment needs m >= 1"));
        }
        if self.n < self.m + 1 {
            return Err(Error::invalid(format!(
                "preferential attachment needs n >= m + 1 (n = {}, m = {})",
                self.n, self.m
            )));
        }
        if !self.alpha.is_finite() {
            return Err(Error::invalid("alpha must be finite"));
        }
        Ok(())
    }
}

/// Undirected edge list of a preferential-attachment graph grown from a
/// clique on `m + 1` nodes.
pub fn preferential_attachment_edges(cfg: &PAConfig) -> Result<Vec<(usize, usize)>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seed_size = cfg.m + 1;
    let mut edges = Vec::new();
    let mut degree = vec![0usize; cfg.n];
    for i in 0..seed_size {
        for j in i + 1..seed_size {
            edges.push((i, j));
            degree[i] += 1;
            degree[j] += 1;
        }
    }
    let mut weights = vec![0.0; cfg.n];
    for new in seed_size..cfg.n {
        for (w, &k) in weights[..new].iter_mut().zip(&degree[..new]) {
            *w = attachment_weight(k, cfg.alpha);
        }
        let mut targets = Vec::with_capacity(cfg.m);
        for _ in 0..cfg.m {
            let t = draw(&mut rng, &weights[..new]);
            weights[t] = 0.0;
            targets.push(t);
        }
        for t in targets {
            edges.push((t, new));
            degree[t] += 1;
            degree[new] += 1;
        }
    }
    Ok(edges)
}

pub fn preferential_attachment(cfg: &PAConfig) -> Result<Network> {
    let edges = preferential_attachment_edges(cfg)?;
    Ok(Network::from_undirected(cfg.n, edges)?.normalize())
}

fn attachment_weight(degree: usize, alpha: f64) -> f64 {
    // powf gives 0^0 = 1, so alpha = 0 is uniform attachment
    (degree as f64).powf(alpha)
}

/// Index drawn with probability proportional to `weights`. Falls back to a
/// uniform draw over the positive entries if the total is not usable.
fn draw(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    if total.is_finite() && total > 0.0 {
        let mut u = rng.random::<f64>() * total;
        let mut last = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                last = i;
                if u < w {
                    return i;
                }
                u -= w;
            }
        }
        return last;
    }
    let live: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
    live[rng.random_range(0..live.len())]
}

/// Hub `0` joined to leaves `1..n`.
pub fn star(n: usize) -> Result<Network> {
    if n < 1 {
        return Err(Error::invalid("star needs at least one node"));
    }
    Ok(Network::from_undirected(n, (1..n).map(|leaf| (0, leaf)))?.normalize())
}

/// Undirected ring on `n >= 3` nodes.
pub fn cycle(n: usize) -> Result<Network> {
    if n < 3 {
        return Err(Error::invalid("cycle needs at least three nodes"));
    }
    Ok(Network::from_undirected(n, (0..n).map(|i| (i, (i + 1) % n)))?.normalize())
}

/// Complete graph without self-loops.
pub fn complete(n: usize) -> Result<Network> {
    if n < 1 {
        return Err(Error::invalid("complete graph needs at least one node"));
    }
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    Ok(Network::from_undirected(n, edges)?.normalize())
}

/// Each unordered pair is joined independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Network> {
    if n < 1 {
        return Err(Error::invalid("Erdos-Renyi graph needs at least one node"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Ok(Network::from_undirected(n, edges)?.normalize())
}
