//! Pairwise merges within Markov blankets, kept whenever they raise EI.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coarse::{causal_emergence_with, coarse_grain, MacroResult, Partition};
use crate::ei::effective_information;
use crate::error::{Error, Result};
use crate::graph::Network;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeOrder {
    #[default]
    AscendingId,
    Random(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyConfig {
    /// Smallest EI increase, in bits, that counts as an improvement.
    pub min_gain: f64,
    pub node_order: NodeOrder,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        Self {
            min_gain: 1e-10,
            node_order: NodeOrder::AscendingId,
        }
    }
}

/// One accepted merge: `target` joined the group seeded by `seed`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Merge {
    pub seed: usize,
    pub target: usize,
    pub ei_before: f64,
    pub ei_after: f64,
}

pub fn greedy_search(net: &Network, cfg: &GreedyConfig) -> Result<MacroResult> {
    greedy_search_traced(net, cfg).map(|(result, _)| result)
}

/// Like [`greedy_search`], also returning the accepted merges in order.
pub fn greedy_search_traced(net: &Network, cfg: &GreedyConfig) -> Result<(MacroResult, Vec<Merge>)> {
    let n = net.len();
    if n < 2 {
        return Err(Error::invalid("greedy search needs at least two nodes"));
    }
    if !(cfg.min_gain >= 0.0) {
        return Err(Error::invalid("min_gain must be nonnegative"));
    }
    let pi = net.stationary();
    let blankets = (0..n)
        .map(|i| net.markov_blanket(i))
        .collect::<Result<Vec<_>>>()?;

    let mut order: Vec<usize> = (0..n).collect();
    if let NodeOrder::Random(seed) = cfg.node_order {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let mut part = Partition::identity(n);
    let mut sizes = vec![1usize; n];
    let mut current = effective_information(net).ei;
    let mut merges = Vec::new();
    let mut queued = vec![false; n];
    for &seed in &order {
        if sizes[part.group_of(seed)] > 1 {
            continue;
        }
        queued.iter_mut().for_each(|q| *q = false);
        queued[seed] = true;
        let mut queue: VecDeque<usize> = blankets[seed].iter().copied().collect();
        for &j in &queue {
            queued[j] = true;
        }
        while let Some(target) = queue.pop_front() {
            if sizes[part.group_of(target)] > 1 {
                continue;
            }
            let candidate = part.merged(part.group_of(seed), part.group_of(target));
            let ei = effective_information(&coarse_grain(net, &pi, &candidate)?).ei;
            if ei - current > cfg.min_gain {
                merges.push(Merge {
                    seed,
                    target,
                    ei_before: current,
                    ei_after: ei,
                });
                current = ei;
                part = candidate;
                sizes = part.group_sizes();
                for &j in &blankets[target] {
                    if !queued[j] {
                        queued[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    Ok((causal_emergence_with(net, &pi, &part)?, merges))
}
