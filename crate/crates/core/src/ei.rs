//! Effective information and its determinism/degeneracy decomposition.
//!
//! For the nodes that have at least one out-edge, EI is the entropy of their
//! mean out-weight vector minus the mean entropy of the individual vectors.
//! All quantities are in bits.

use serde::{Deserialize, Serialize};

use crate::graph::Network;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EIBreakdown {
    pub ei: f64,
    pub determinism: f64,
    pub degeneracy: f64,
    pub indeterminism: f64,
    /// Nodes with out-degree at least one.
    pub effective_nodes: usize,
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy_bits<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    let h: f64 = probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| p * p.log2())
        .sum();
    // rounding can push a near-certain distribution just past zero
    if h >= 0.0 {
        0.0
    } else {
        -h
    }
}

/// EI of a normalized network. A network without edges yields all zeros.
pub fn effective_information(net: &Network) -> EIBreakdown {
    let n = net.len();
    let mut mean = vec![0.0; n];
    let mut row_entropy = 0.0;
    let mut effective = 0usize;
    for i in 0..n {
        let row = net.row(i);
        if row.iter().all(|&w| w == 0.0) {
            continue;
        }
        effective += 1;
        row_entropy += entropy_bits(row.iter().copied());
        for (m, &w) in mean.iter_mut().zip(row) {
            *m += w;
        }
    }
    if effective == 0 {
        return EIBreakdown::default();
    }
    let k = effective as f64;
    let h_mean = entropy_bits(mean.iter().map(|&m| m / k));
    let indeterminism = row_entropy / k;
    let log_n = k.log2();
    EIBreakdown {
        ei: h_mean - indeterminism,
        determinism: log_n - indeterminism,
        degeneracy: log_n - h_mean,
        indeterminism,
        effective_nodes: effective,
    }
}
