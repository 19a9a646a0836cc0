//! OPTICS density ordering over a dense distance matrix, plus DBSCAN-style
//! cluster extraction at a fixed threshold.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric pairwise distances; `f64::INFINITY` marks pairs that may never
/// share a cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {} distances, got {}",
                n * n,
                d.len()
            )));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::invalid(format!("distance of node {i} to itself is not 0")));
            }
            for j in 0..n {
                let x = d[i * n + j];
                if x.is_nan() || x < 0.0 {
                    return Err(Error::invalid(format!("invalid distance {x} at ({i}, {j})")));
                }
                if x != d[j * n + i] {
                    return Err(Error::invalid(format!("distances at ({i}, {j}) are not symmetric")));
                }
            }
        }
        Ok(Self { n, d })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpticsConfig {
    /// Neighbourhood size, counting the point itself, that makes a core point.
    pub min_samples: usize,
    /// Number of thresholds tried when extracting clusterings.
    pub epsilon_grid: usize,
    /// Neighbourhood radius; distances above it are ignored.
    pub max_eps: f64,
}

impl Default for OpticsConfig {
    fn default() -> Self {
        Self {
            min_samples: 2,
            epsilon_grid: 40,
            max_eps: f64::INFINITY,
        }
    }
}

impl OpticsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_samples < 2 {
            return Err(Error::invalid("min_samples must be at least 2"));
        }
        if self.epsilon_grid < 1 {
            return Err(Error::invalid("epsilon_grid must be at least 1"));
        }
        if self.max_eps.is_nan() || self.max_eps < 0.0 {
            return Err(Error::invalid("max_eps must be nonnegative"));
        }
        Ok(())
    }
}

/// Output of [`optics_order`]. `reachability[k]` and `core_distance[k]`
/// belong to the point `order[k]`; undefined values are infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct OpticsOrdering {
    pub order: Vec<usize>,
    pub reachability: Vec<f64>,
    pub core_distance: Vec<f64>,
}

#[derive(PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

fn core_distance(d: &DistanceMatrix, p: usize, cfg: &OpticsConfig, buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    buf.extend((0..d.len()).map(|q| d.get(p, q)).filter(|&x| x <= cfg.max_eps));
    if buf.len() < cfg.min_samples {
        return f64::INFINITY;
    }
    let k = cfg.min_samples - 1;
    *buf.select_nth_unstable_by(k, f64::total_cmp).1
}

/// Orders points so that density-connected points are adjacent. Ties are
/// broken by the lower point index, which makes the ordering deterministic.
pub fn optics_order(d: &DistanceMatrix, cfg: &OpticsConfig) -> Result<OpticsOrdering> {
    cfg.validate()?;
    let n = d.len();
    let mut buf = Vec::with_capacity(n);
    let core: Vec<f64> = (0..n).map(|p| core_distance(d, p, cfg, &mut buf)).collect();
    let mut reach = vec![f64::INFINITY; n];
    let mut processed = vec![false; n];
    let mut out = OpticsOrdering {
        order: Vec::with_capacity(n),
        reachability: Vec::with_capacity(n),
        core_distance: Vec::with_capacity(n),
    };
    let mut seeds = BinaryHeap::new();
    for start in 0..n {
        if processed[start] {
            continue;
        }
        seeds.push(Reverse(Key(f64::INFINITY, start)));
        while let Some(Reverse(Key(r, p))) = seeds.pop() {
            // stale heap entries are skipped
            if processed[p] || r > reach[p] {
                continue;
            }
            processed[p] = true;
            out.order.push(p);
            out.reachability.push(reach[p]);
            out.core_distance.push(core[p]);
            if !core[p].is_finite() {
                continue;
            }
            for q in 0..n {
                let dq = d.get(p, q);
                if processed[q] || dq > cfg.max_eps || !dq.is_finite() {
                    continue;
                }
                let candidate = core[p].max(dq);
                if candidate < reach[q] {
                    reach[q] = candidate;
                    seeds.push(Reverse(Key(candidate, q)));
                }
            }
        }
    }
    Ok(out)
}

/// Cluster labels from a horizontal cut of the reachability plot at `eps`,
/// equivalent to DBSCAN with the same `min_samples`. `None` marks noise.
pub fn extract_clusters(ordering: &OpticsOrdering, eps: f64, n: usize) -> Vec<Option<usize>> {
    let mut labels = vec![None; n];
    let mut current: Option<usize> = None;
    let mut next = 0;
    for (k, &p) in ordering.order.iter().enumerate() {
        if ordering.reachability[k] > eps {
            if ordering.core_distance[k] <= eps {
                current = Some(next);
                next += 1;
                labels[p] = current;
            } else {
                current = None;
            }
        } else {
            labels[p] = current;
        }
    }
    labels
}

/// Thresholds worth cutting at: the distinct finite reachability and core
/// distances, thinned to at most `grid` evenly spaced quantiles.
pub fn epsilon_candidates(ordering: &OpticsOrdering, grid: usize) -> Vec<f64> {
    let mut values: Vec<f64> = ordering
        .reachability
        .iter()
        .chain(&ordering.core_distance)
        .copied()
        .filter(|x| x.is_finite())
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    if values.len() <= grid || grid == 0 {
        return values;
    }
    if grid == 1 {
        return vec![values[values.len() / 2]];
    }
    let last = values.len() - 1;
    let mut picked: Vec<f64> = (0..grid)
        .map(|k| values[(k * last + (grid - 1) / 2) / (grid - 1)])
        .collect();
    picked.dedup();
    picked
}
