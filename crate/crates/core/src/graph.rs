//! Dense weighted directed networks.
//!
//! A [`Network`] stores an `n x n` row-major weight matrix where entry
//! `(i, j)` is the weight of the edge `i -> j`. Once normalized, row `i` is the
//! out-weight vector of node `i`: the transition probabilities of a random
//! walker sitting on `i`. Rows of zeros (dangling nodes) are kept.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Rows whose sum is this close to one are treated as already normalized and
/// left untouched, which makes [`Network::normalize`] idempotent bit-for-bit.
const ROW_SUM_SLACK: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    n: usize,
    weights: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl Network {
    /// Builds a network from a row-major `n x n` weight matrix.
    pub fn from_dense(n: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {} weights for {n} nodes, got {}",
                n * n,
                weights.len()
            )));
        }
        for (k, &w) in weights.iter().enumerate() {
            check_weight(k / n.max(1), k % n.max(1), w)?;
        }
        Ok(Self {
            n,
            weights,
            labels: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut weights = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            weights.extend_from_slice(row);
        }
        Self::from_dense(n, weights)
    }

    /// Builds a network from directed `(source, target, weight)` triples.
    /// Repeated edges are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut weights = vec![0.0; n * n];
        for (i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::invalid(format!(
                    "edge {i} -> {j} out of range for {n} nodes"
                )));
            }
            check_weight(i, j, w)?;
            if weights[i * n + j] != 0.0 {
                return Err(Error::invalid(format!("duplicate edge {i} -> {j}")));
            }
            weights[i * n + j] = w;
        }
        Ok(Self {
            n,
            weights,
            labels: None,
        })
    }

    /// Builds a directed network with `w_ij = w_ji = 1` for every undirected
    /// edge `{i, j}`. A pair `(i, i)` adds a self-loop.
    pub fn from_undirected<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut weights = vec![0.0; n * n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::invalid(format!(
                    "edge {i} -- {j} out of range for {n} nodes"
                )));
            }
            weights[i * n + j] = 1.0;
            weights[j * n + i] = 1.0;
        }
        Ok(Self {
            n,
            weights,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::invalid(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of node `i`, or its index when the network is unlabeled.
    pub fn node_name(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.weights[i * self.n..(i + 1) * self.n]
    }

    /// Row-major weight matrix.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.weight(i, j) > 0.0
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.row(i).iter().filter(|&&w| w > 0.0).count()
    }

    pub fn edge_count(&self) -> usize {
        self.weights.iter().filter(|&&w| w > 0.0).count()
    }

    /// A node with no out-edges.
    pub fn is_dangling(&self, i: usize) -> bool {
        self.row(i).iter().all(|&w| w == 0.0)
    }

    pub fn dangling_nodes(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.is_dangling(i)).collect()
    }

    pub fn children(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(j, _)| j)
    }

    pub fn parents(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.weight(i, j) > 0.0)
    }

    /// Sparse view of the out-edges of each node.
    pub fn out_edges(&self) -> Vec<Vec<(usize, f64)>> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w > 0.0)
                    .map(|(j, &w)| (j, w))
                    .collect()
            })
            .collect()
    }

    /// Divides every nonzero row by its sum. Zero rows are left as they are.
    pub fn normalize(&self) -> Network {
        let n = self.n;
        let mut weights = self.weights.clone();
        for row in weights.chunks_mut(n.max(1)) {
            let sum: f64 = row.iter().sum();
            if sum > 0.0 && (sum - 1.0).abs() > ROW_SUM_SLACK {
                for w in row.iter_mut() {
                    *w /= sum;
                }
            }
        }
        Network {
            n,
            weights,
            labels: self.labels.clone(),
        }
    }

    /// True when every non-dangling row sums to one within `1e-12`.
    pub fn is_normalized(&self) -> bool {
        (0..self.n).all(|i| {
            let s: f64 = self.row(i).iter().sum();
            s == 0.0 || (s - 1.0).abs() <= 1e-12
        })
    }

    /// Stationary distribution with the default tolerance and iteration cap.
    pub fn stationary(&self) -> StationaryDistribution {
        self.stationary_with(DEFAULT_STATIONARY_TOL, default_max_iter(self.n))
    }

    /// Power iteration from the uniform vector.
    ///
    /// Each step applies the lazy chain `pi <- (pi + pi W) / 2`, which has the
    /// same fixed points as `W` but cannot oscillate on periodic chains. Mass
    /// on dangling nodes is spread uniformly over all nodes.
    pub fn stationary_with(&self, tol: f64, max_iter: usize) -> StationaryDistribution {
        let n = self.n;
        if n == 0 {
            return StationaryDistribution {
                pi: Vec::new(),
                converged: true,
                iterations: 0,
            };
        }
        let edges = self.out_edges();
        let mut pi = vec![1.0 / n as f64; n];
        let mut next = vec![0.0; n];
        let mut iterations = 0;
        let mut converged = false;
        while iterations < max_iter {
            iterations += 1;
            walk_step(&edges, &pi, &mut next, None);
            for (x, &p) in next.iter_mut().zip(&pi) {
                *x = 0.5 * (*x + p);
            }
            let s: f64 = next.iter().sum();
            for x in next.iter_mut() {
                *x /= s;
            }
            let change: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
            std::mem::swap(&mut pi, &mut next);
            if change <= tol {
                converged = true;
                break;
            }
        }
        StationaryDistribution {
            pi,
            converged,
            iterations,
        }
    }

    /// Parents, children and parents of children of `i`, without `i`.
    pub fn markov_blanket(&self, i: usize) -> Result<BTreeSet<usize>> {
        if i >= self.n {
            return Err(Error::invalid(format!(
                "node {i} out of range for {} nodes",
                self.n
            )));
        }
        let mut blanket: BTreeSet<usize> = self.parents(i).collect();
        for c in self.children(i) {
            blanket.insert(c);
            blanket.extend(self.parents(c));
        }
        blanket.remove(&i);
        Ok(blanket)
    }

    /// Symmetric `n x n` membership table: entry `i * n + j` is true when `j`
    /// lies in the Markov blanket of `i` or `i` in that of `j`.
    pub fn blanket_table(&self) -> Vec<bool> {
        let n = self.n;
        let mut table = vec![false; n * n];
        let parents: Vec<Vec<usize>> = (0..n).map(|j| self.parents(j).collect()).collect();
        for i in 0..n {
            for j in self.children(i) {
                table[i * n + j] = true;
                table[j * n + i] = true;
            }
        }
        for ps in &parents {
            for &a in ps {
                for &b in ps {
                    table[a * n + b] = true;
                }
            }
        }
        for i in 0..n {
            table[i * n + i] = false;
        }
        table
    }

    /// Relabels nodes so that old node `i` becomes node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Network> {
        let n = self.n;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::invalid("not a permutation"));
        }
        let mut weights = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                weights[perm[i] * n + perm[j]] = self.weight(i, j);
            }
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for i in 0..n {
                out[perm[i]] = l[i].clone();
            }
            out
        });
        Ok(Network { n, weights, labels })
    }
}

pub const DEFAULT_STATIONARY_TOL: f64 = 1e-12;

pub fn default_max_iter(n: usize) -> usize {
    1000 * n + 10_000
}

/// Long-run occupancy of a random walker started from the uniform vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryDistribution {
    pub pi: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl StationaryDistribution {
    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }
}

/// One step of the walk: `out = dist * W`, with the mass of dangling rows sent
/// to `teleport` (uniform when `None`).
pub(crate) fn walk_step(
    edges: &[Vec<(usize, f64)>],
    dist: &[f64],
    out: &mut [f64],
    teleport: Option<&[f64]>,
) {
    let n = dist.len();
    out.iter_mut().for_each(|x| *x = 0.0);
    let mut dangling = 0.0;
    for (i, row) in edges.iter().enumerate() {
        let p = dist[i];
        if p == 0.0 {
            continue;
        }
        if row.is_empty() {
            dangling += p;
            continue;
        }
        for &(j, w) in row {
            out[j] += p * w;
        }
    }
    if dangling > 0.0 {
        match teleport {
            Some(t) => {
                for (x, &t) in out.iter_mut().zip(t) {
                    *x += dangling * t;
                }
            }
            None => {
                let share = dangling / n as f64;
                out.iter_mut().for_each(|x| *x += share);
            }
        }
    }
}

fn check_weight(i: usize, j: usize, w: f64) -> Result<()> {
    if !w.is_finite() || w < 0.0 {
        return Err(Error::invalid(format!(
            "weight of edge {i} -> {j} must be finite and nonnegative, got {w}"
        )));
    }
    Ok(())
}
