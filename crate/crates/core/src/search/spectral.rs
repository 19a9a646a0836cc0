//! Spectral embedding of the transition matrix, clustered with OPTICS.
//!
//! Each node is described by its entries in the eigenvectors with nonzero
//! eigenvalue, weighted by those eigenvalues. Nodes that point into the
//! kernel in the same way end up close in cosine distance and are candidates
//! for the same macro-node. Only Markov-blanket pairs get a finite distance.

use std::collections::BTreeSet;

use faer::c64;
use serde::{Deserialize, Serialize};

use crate::coarse::{causal_emergence_with, coarse_grain, MacroResult, Partition};
use crate::ei::effective_information;
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::linalg;
use crate::search::optics::{
    epsilon_candidates, extract_clusters, optics_order, DistanceMatrix, OpticsConfig,
};

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralEmbedding {
    n: usize,
    /// Row-major `n x dim`.
    vectors: Vec<f64>,
    dim: usize,
    /// Retained eigenvalues; each complex pair appears once and spans two
    /// coordinates.
    pub eigenvalues: Vec<c64>,
    pub zero_tol: f64,
}

impl SpectralEmbedding {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of coordinates per node: the rank of the transition matrix
    /// as seen through its nonzero eigenvalues.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    pub optics: OpticsConfig,
    /// Eigenvalues with `|lambda| <= zero_tol * max |lambda|` count as zero.
    pub zero_tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            optics: OpticsConfig::default(),
            zero_tol: 1e-10,
        }
    }
}

pub fn embed(net: &Network, zero_tol: f64) -> Result<SpectralEmbedding> {
    if !(zero_tol >= 0.0) {
        return Err(Error::invalid("zero_tol must be nonnegative"));
    }
    let n = net.len();
    let (values, vectors) = linalg::eigen(net)?;
    let top = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let cutoff = zero_tol * top;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut kept = Vec::new();
    for (k, &lambda) in values.iter().enumerate() {
        let size = lambda.norm();
        if size <= cutoff || size == 0.0 {
            continue;
        }
        let v: Vec<c64> = (0..n).map(|i| vectors[(i, k)]).collect();
        if lambda.im.abs() <= 1e-12 * top {
            // a real eigenvector may come back with an arbitrary complex phase
            let pivot = v
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap_or(c64::new(1.0, 0.0));
            let phase = if pivot.norm() > 0.0 {
                pivot.conj() / pivot.norm()
            } else {
                c64::new(1.0, 0.0)
            };
            columns.push(v.iter().map(|&z| (z * phase).re * size).collect());
            kept.push(lambda);
        } else if lambda.im > 0.0 {
            columns.push(v.iter().map(|z| z.re * size).collect());
            columns.push(v.iter().map(|z| z.im * size).collect());
            kept.push(lambda);
        }
    }
    let dim = columns.len();
    let mut flat = vec![0.0; n * dim];
    for (c, col) in columns.iter().enumerate() {
        for i in 0..n {
            flat[i * dim + c] = col[i];
        }
    }
    Ok(SpectralEmbedding {
        n,
        vectors: flat,
        dim,
        eigenvalues: kept,
        zero_tol,
    })
}

/// Cosine distances between blanket pairs; every other pair is infinitely far.
pub fn distances(emb: &SpectralEmbedding, net: &Network) -> Result<DistanceMatrix> {
    let n = net.len();
    if emb.len() != n {
        return Err(Error::invalid(format!(
            "embedding has {} rows, network has {n} nodes",
            emb.len()
        )));
    }
    let blanket = net.blanket_table();
    let norms: Vec<f64> = (0..n)
        .map(|i| emb.row(i).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let top = norms.iter().copied().fold(0.0f64, f64::max);
    let is_zero = |i: usize| norms[i] <= 1e-12 * top || norms[i] == 0.0;
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let x = if !blanket[i * n + j] {
                f64::INFINITY
            } else {
                match (is_zero(i), is_zero(j)) {
                    (true, true) => 0.0,
                    (true, false) | (false, true) => 2.0,
                    (false, false) => {
                        let dot: f64 = emb.row(i).iter().zip(emb.row(j)).map(|(a, b)| a * b).sum();
                        (1.0 - dot / (norms[i] * norms[j])).clamp(0.0, 2.0)
                    }
                }
            };
            d[i * n + j] = x;
            d[j * n + i] = x;
        }
    }
    DistanceMatrix::new(n, d)
}

/// Candidate partitions from OPTICS cuts, with noise points left as
/// singletons. Duplicates are dropped; order follows increasing threshold.
pub fn candidate_partitions(d: &DistanceMatrix, cfg: &OpticsConfig) -> Result<Vec<Partition>> {
    let n = d.len();
    let ordering = optics_order(d, cfg)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for eps in epsilon_candidates(&ordering, cfg.epsilon_grid) {
        if eps > cfg.max_eps {
            continue;
        }
        let labels = extract_clusters(&ordering, eps, n);
        let clusters = labels.iter().flatten().max().map_or(0, |&m| m + 1);
        let mut noise = clusters;
        let raw: Vec<usize> = labels
            .iter()
            .map(|l| {
                l.unwrap_or_else(|| {
                    noise += 1;
                    noise - 1
                })
            })
            .collect();
        let part = Partition::from_assignment(raw)?;
        if part.is_identity() {
            continue;
        }
        if seen.insert(part.assignment().to_vec()) {
            out.push(part);
        }
    }
    Ok(out)
}

pub fn spectral_search(net: &Network, cfg: &SpectralConfig) -> Result<MacroResult> {
    cfg.optics.validate()?;
    let n = net.len();
    let pi = net.stationary();
    let ei_micro = effective_information(net).ei;
    let mut best: Option<(f64, Partition)> = None;
    if n >= 2 {
        let emb = embed(net, cfg.zero_tol)?;
        let d = distances(&emb, net)?;
        for part in candidate_partitions(&d, &cfg.optics)? {
            let gain = effective_information(&coarse_grain(net, &pi, &part)?).ei - ei_micro;
            if gain > best.as_ref().map_or(1e-12, |b| b.0) {
                best = Some((gain, part));
            }
        }
    }
    let part = best.map_or_else(|| Partition::identity(n), |b| b.1);
    causal_emergence_with(net, &pi, &part)
}
