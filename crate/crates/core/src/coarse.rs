//! Coarse-grainings of a network into macro-nodes.
//!
//! A macro-node replaces a group of micro-nodes with a single node whose
//! out-weights are the stationary-distribution-weighted average of the
//! members' out-weights. Mass that lands back inside the group becomes a
//! self-loop of the macro-node.

use serde::Serialize;

use crate::ei::effective_information;
use crate::error::{Error, Result};
use crate::graph::{walk_step, Network, StationaryDistribution};

/// Default number of steps compared by [`accuracy`].
pub const DEFAULT_HORIZON: usize = 10;

/// Assignment of every micro-node to exactly one group.
///
/// Group ids are canonical: numbered `0..k` in order of first appearance, so
/// two equal partitions always compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    assignment: Vec<usize>,
    group_count: usize,
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            group_count: n,
        }
    }

    /// Builds a partition from arbitrary group ids, relabelling them
    /// canonically.
    pub fn from_assignment(raw: Vec<usize>) -> Result<Self> {
        let n = raw.len();
        let mut relabel: Vec<Option<usize>> = Vec::new();
        let mut next = 0;
        let mut assignment = Vec::with_capacity(n);
        for g in raw {
            if g >= relabel.len() {
                if g > 4 * n + 16 {
                    return Err(Error::invalid(format!("group id {g} too large for {n} nodes")));
                }
                relabel.resize(g + 1, None);
            }
            let id = *relabel[g].get_or_insert_with(|| {
                next += 1;
                next - 1
            });
            assignment.push(id);
        }
        Ok(Self {
            assignment,
            group_count: next,
        })
    }

    /// Builds a partition from explicit groups; every node in `0..n` must
    /// appear exactly once.
    pub fn from_groups(n: usize, groups: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (g, members) in groups.iter().enumerate() {
            for &i in members {
                if i >= n {
                    return Err(Error::invalid(format!("node {i} out of range for {n} nodes")));
                }
                if raw[i] != usize::MAX {
                    return Err(Error::invalid(format!("node {i} is in two groups")));
                }
                raw[i] = g;
            }
        }
        if let Some(i) = raw.iter().position(|&g| g == usize::MAX) {
            return Err(Error::invalid(format!("node {i} is in no group")));
        }
        let mut assignment = vec![0; n];
        let mut next = 0;
        let mut relabel = vec![usize::MAX; groups.len()];
        for i in 0..n {
            let g = raw[i];
            if relabel[g] == usize::MAX {
                relabel[g] = next;
                next += 1;
            }
            assignment[i] = relabel[g];
        }
        Ok(Self {
            assignment,
            group_count: next,
        })
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn group_count(&self) -> usize {
        self.group_count
    }

    pub fn group_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    /// Members of each group, in ascending node order.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.group_count];
        for (i, &g) in self.assignment.iter().enumerate() {
            groups[g].push(i);
        }
        groups
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.group_count];
        for &g in &self.assignment {
            sizes[g] += 1;
        }
        sizes
    }

    pub fn largest_group_size(&self) -> usize {
        self.group_sizes().into_iter().max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.group_count == self.assignment.len()
    }

    /// Moves every node of group `b` into group `a`.
    pub fn merged(&self, a: usize, b: usize) -> Partition {
        let raw = self
            .assignment
            .iter()
            .map(|&g| if g == b { a } else { g })
            .collect();
        Partition::from_assignment(raw).expect("ids stay in range")
    }

    /// Applies `coarser`, a partition of this partition's groups.
    pub fn compose(&self, coarser: &Partition) -> Result<Partition> {
        if coarser.len() != self.group_count {
            return Err(Error::invalid(format!(
                "outer partition covers {} groups, inner has {}",
                coarser.len(),
                self.group_count
            )));
        }
        Partition::from_assignment(
            self.assignment
                .iter()
                .map(|&g| coarser.group_of(g))
                .collect(),
        )
    }
}

/// Outcome of recasting a network under a partition.
#[derive(Clone, Debug, PartialEq)]
pub struct MacroResult {
    pub macro_net: Network,
    pub partition: Partition,
    pub ei_micro: f64,
    pub ei_macro: f64,
    /// `ei_macro - ei_micro`; positive when the macroscale is more informative.
    pub causal_emergence: f64,
    pub accuracy: f64,
}

impl MacroResult {
    pub fn macro_node_count(&self) -> usize {
        self.partition.group_count()
    }
}

fn check_lengths(net: &Network, pi: &StationaryDistribution, part: &Partition) -> Result<()> {
    if part.len() != net.len() {
        return Err(Error::invalid(format!(
            "partition covers {} nodes, network has {}",
            part.len(),
            net.len()
        )));
    }
    if pi.len() != net.len() {
        return Err(Error::invalid(format!(
            "stationary distribution has {} entries, network has {}",
            pi.len(),
            net.len()
        )));
    }
    Ok(())
}

/// Builds the macroscale network with one node per group of `part`.
///
/// Groups with zero stationary mass fall back to the unweighted mean of their
/// members' rows.
pub fn coarse_grain(
    net: &Network,
    pi: &StationaryDistribution,
    part: &Partition,
) -> Result<Network> {
    check_lengths(net, pi, part)?;
    let k = part.group_count();
    let mut group_mass = vec![0.0; k];
    let sizes = part.group_sizes();
    for (i, &p) in pi.pi.iter().enumerate() {
        group_mass[part.group_of(i)] += p;
    }
    let mut weights = vec![0.0; k * k];
    for i in 0..net.len() {
        let g = part.group_of(i);
        let share = if group_mass[g] > 0.0 {
            pi.pi[i] / group_mass[g]
        } else {
            1.0 / sizes[g] as f64
        };
        if share == 0.0 {
            continue;
        }
        let row = &mut weights[g * k..(g + 1) * k];
        for (j, &w) in net.row(i).iter().enumerate() {
            if w > 0.0 {
                row[part.group_of(j)] += share * w;
            }
        }
    }
    Ok(Network::from_dense(k, weights)?.normalize())
}

/// Computes the stationary distribution of `net`, recasts it under `part` and
/// reports the change in EI.
pub fn causal_emergence(net: &Network, part: &Partition) -> Result<MacroResult> {
    let pi = net.stationary();
    causal_emergence_with(net, &pi, part)
}

pub fn causal_emergence_with(
    net: &Network,
    pi: &StationaryDistribution,
    part: &Partition,
) -> Result<MacroResult> {
    let macro_net = coarse_grain(net, pi, part)?;
    let ei_micro = effective_information(net).ei;
    let ei_macro = effective_information(&macro_net).ei;
    let accuracy = accuracy_of(net, &macro_net, part, DEFAULT_HORIZON);
    Ok(MacroResult {
        macro_net,
        partition: part.clone(),
        ei_micro,
        ei_macro,
        causal_emergence: ei_macro - ei_micro,
        accuracy,
    })
}

/// How closely random walkers on the macroscale track the projected
/// microscale walk, as `1 - mean total-variation distance` over `horizon`
/// steps. Both walks start from the uniform micro distribution.
pub fn accuracy(net: &Network, part: &Partition, horizon: usize) -> Result<f64> {
    if horizon == 0 {
        return Err(Error::invalid("accuracy horizon must be at least 1"));
    }
    let pi = net.stationary();
    let macro_net = coarse_grain(net, &pi, part)?;
    Ok(accuracy_of(net, &macro_net, part, horizon))
}

pub(crate) fn accuracy_of(
    net: &Network,
    macro_net: &Network,
    part: &Partition,
    horizon: usize,
) -> f64 {
    let n = net.len();
    let k = part.group_count();
    if n == 0 || horizon == 0 {
        return 1.0;
    }
    let project = |dist: &[f64]| {
        let mut out = vec![0.0; k];
        for (i, &p) in dist.iter().enumerate() {
            out[part.group_of(i)] += p;
        }
        out
    };
    let micro_edges = net.out_edges();
    let macro_edges = macro_net.out_edges();
    // Dangling macro-nodes send their mass where the projected micro teleport
    // would put it.
    let macro_teleport: Vec<f64> = part
        .group_sizes()
        .into_iter()
        .map(|s| s as f64 / n as f64)
        .collect();

    let mut micro = vec![1.0 / n as f64; n];
    let mut macro_dist = project(&micro);
    let mut micro_next = vec![0.0; n];
    let mut macro_next = vec![0.0; k];
    let mut total = 0.0;
    for _ in 0..horizon {
        walk_step(&micro_edges, &micro, &mut micro_next, None);
        walk_step(&macro_edges, &macro_dist, &mut macro_next, Some(&macro_teleport));
        std::mem::swap(&mut micro, &mut micro_next);
        std::mem::swap(&mut macro_dist, &mut macro_next);
        let projected = project(&micro);
        let tv: f64 = projected
            .iter()
            .zip(&macro_dist)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 2.0;
        total += tv;
    }
    1.0 - total / horizon as f64
}
