//! Network properties compared across scales.
//!
//! Path-based measures (efficiency, betweenness) and the structural measures
//! (eigenvector centrality, communicability, degrees) use the unweighted edge
//! structure: `i -> j` exists iff `w_ij > 0`. Information measures use the
//! normalized weights.

use std::collections::VecDeque;

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::coarse::Partition;
use crate::ei::{effective_information, entropy_bits};
use crate::error::{Error, Result};
use crate::graph::{Network, StationaryDistribution};
use crate::linalg;

/// Default relative tolerance on singular values for rank decisions.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-10;

/// Entropy rate of a random walker at stationarity, in bits per step.
pub fn entropy_rate(net: &Network, pi: &StationaryDistribution) -> f64 {
    let h: f64 = (0..net.len())
        .map(|i| pi.pi[i] * entropy_bits(net.row(i).iter().copied()))
        .sum();
    h.max(0.0)
}

fn adjacency_lists(net: &Network) -> Vec<Vec<usize>> {
    (0..net.len())
        .map(|i| net.children(i).filter(|&j| j != i).collect())
        .collect()
}

fn bfs_distances(adj: &[Vec<usize>], source: usize, dist: &mut [usize]) {
    dist.iter_mut().for_each(|d| *d = usize::MAX);
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
}

/// Mean of `1 / d(i, j)` over ordered pairs `i != j`; unreachable pairs
/// contribute zero.
pub fn global_efficiency(net: &Network) -> f64 {
    let n = net.len();
    if n < 2 {
        return 0.0;
    }
    let adj = adjacency_lists(net);
    let mut dist = vec![0; n];
    let mut total = 0.0;
    for s in 0..n {
        bfs_distances(&adj, s, &mut dist);
        total += dist
            .iter()
            .enumerate()
            .filter(|&(t, &d)| t != s && d != usize::MAX)
            .map(|(_, &d)| 1.0 / d as f64)
            .sum::<f64>();
    }
    total / (n * (n - 1)) as f64
}

/// Betweenness centrality (Brandes), normalized by `(n - 1)(n - 2)`.
pub fn betweenness(net: &Network) -> Vec<f64> {
    let n = net.len();
    let mut centrality = vec![0.0; n];
    if n < 3 {
        return centrality;
    }
    let adj = adjacency_lists(net);
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack = Vec::with_capacity(n);
    for s in 0..n {
        stack.clear();
        for v in 0..n {
            preds[v].clear();
            sigma[v] = 0.0;
            dist[v] = usize::MAX;
            delta[v] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }
    let scale = 1.0 / ((n - 1) * (n - 2)) as f64;
    centrality.iter_mut().for_each(|c| *c *= scale);
    centrality
}

/// Dominant eigenvector of the binary adjacency structure (a node scores
/// highly when it is pointed to by high-scoring nodes), L2-normalized.
///
/// Plain power iteration is tried first; periodic structures that keep it
/// from settling are retried on `A + I`, which has the same eigenvectors.
pub fn eigenvector_centrality(net: &Network) -> Vec<f64> {
    let n = net.len();
    if n == 0 {
        return Vec::new();
    }
    let parents: Vec<Vec<usize>> = (0..n).map(|j| net.parents(j).collect()).collect();
    power_centrality(&parents, 0.0, 1000)
        .or_else(|| power_centrality(&parents, 1.0, 100_000))
        .unwrap_or_else(|| vec![0.0; n])
}

fn power_centrality(parents: &[Vec<usize>], shift: f64, max_iter: usize) -> Option<Vec<f64>> {
    let n = parents.len();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        for j in 0..n {
            next[j] = shift * x[j] + parents[j].iter().map(|&i| x[i]).sum::<f64>();
        }
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Some(vec![0.0; n]);
        }
        next.iter_mut().for_each(|v| *v /= norm);
        let diff: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if diff <= 1e-12 * n as f64 {
            return Some(x);
        }
    }
    None
}

/// Entropy of the communicability sequence: the upper-triangular entries of
/// `exp(A)` for the binary adjacency `A`, normalized to sum to one.
pub fn communicability_entropy(net: &Network) -> f64 {
    let n = net.len();
    if n < 2 {
        return 0.0;
    }
    let a = Mat::from_fn(n, n, |i, j| if net.has_edge(i, j) { 1.0 } else { 0.0 });
    let c = linalg::expm(a.as_ref());
    let upper: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| c[(i, j)])
        .collect();
    let total: f64 = upper.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return 0.0;
    }
    entropy_bits(upper.iter().map(|&v| v / total))
}

/// Number of distinct neighbours of each node, ignoring direction and
/// self-loops.
pub fn undirected_degrees(net: &Network) -> Vec<usize> {
    let n = net.len();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && (net.has_edge(i, j) || net.has_edge(j, i)))
                .count()
        })
        .collect()
}

/// Mean and population variance of the undirected degree.
pub fn degree_stats(net: &Network) -> (f64, f64) {
    let deg = undirected_degrees(net);
    if deg.is_empty() {
        return (0.0, 0.0);
    }
    let k = deg.len() as f64;
    let mean = deg.iter().map(|&d| d as f64).sum::<f64>() / k;
    let var = deg.iter().map(|&d| (d as f64 - mean).powi(2)).sum::<f64>() / k;
    (mean, var)
}

/// Pearson correlation of the degrees at either end of each undirected
/// edge. `None` when every edge endpoint has the same degree.
pub fn assortativity(net: &Network) -> Option<f64> {
    let n = net.len();
    let deg = undirected_degrees(net);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if net.has_edge(i, j) || net.has_edge(j, i) {
                let (a, b) = (deg[i] as f64, deg[j] as f64);
                xs.extend([a, b]);
                ys.extend([b, a]);
            }
        }
    }
    if xs.is_empty() {
        return None;
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if vx <= 1e-12 * k || vy <= 1e-12 * k {
        return None;
    }
    Some((cov / (vx * vy).sqrt()).clamp(-1.0, 1.0))
}

/// `n - rank(W)`, counting singular values above `tol * sigma_max`.
pub fn kernel_dimension(net: &Network, tol: f64) -> Result<usize> {
    let m = linalg::to_mat(net);
    Ok(net.len() - linalg::rank(m.as_ref(), tol)?)
}

/// A distribution `w != x` with the same one-step successor as `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegenerateWitness {
    pub w: Vec<f64>,
    /// Kernel direction `v` (scaled to max-abs one), with `w = x + step * v`.
    pub direction: Vec<f64>,
    pub step: f64,
    /// Largest step keeping `w` nonnegative.
    pub max_step: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessOutcome {
    /// The transition matrix is full rank: every distribution has a distinct
    /// successor.
    TrivialKernel,
    /// The kernel is nontrivial but no direction keeps `w` a distribution.
    NoFeasibleDirection,
    Found(DegenerateWitness),
}

const WITNESS_SEARCH_DRAWS: usize = 4000;

/// Uses the kernel of the transition matrix to build a second distribution
/// that the walk maps onto the same successor as `x`.
pub fn degenerate_witness(net: &Network, x: &[f64], seed: u64) -> Result<WitnessOutcome> {
    let n = net.len();
    if x.len() != n {
        return Err(Error::invalid(format!(
            "distribution has {} entries, network has {n}",
            x.len()
        )));
    }
    if x.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::invalid("distribution entries must be nonnegative"));
    }
    if (x.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("distribution must sum to one"));
    }
    if kernel_dimension(net, DEFAULT_KERNEL_TOL)? == 0 {
        return Ok(WitnessOutcome::TrivialKernel);
    }

    // Directions v with W^T v = 0 and sum(v) = 0; rows pinning v[i] = 0 on the
    // support gaps of x are added first.
    let zeros: Vec<usize> = (0..n).filter(|&i| x[i] == 0.0).collect();
    let constrained = |pinned: &[usize]| {
        let rows = n + 1 + pinned.len();
        let m = Mat::from_fn(rows, n, |r, c| {
            if r < n {
                net.weight(c, r)
            } else if r == n {
                1.0
            } else {
                if pinned[r - n - 1] == c {
                    1.0
                } else {
                    0.0
                }
            }
        });
        linalg::null_space(m.as_ref(), DEFAULT_KERNEL_TOL)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut combine = |basis: &[Vec<f64>]| -> Vec<f64> {
        let mut v = vec![0.0; n];
        for b in basis {
            let c: f64 = StandardNormal.sample(&mut rng);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += c * bi;
            }
        }
        v
    };

    let mut direction = None;
    if !zeros.is_empty() {
        let pinned = constrained(&zeros)?;
        if !pinned.is_empty() {
            let mut v = combine(&pinned);
            for &i in &zeros {
                v[i] = 0.0;
            }
            direction = Some(v);
        }
    }
    if direction.is_none() {
        let basis = constrained(&[])?;
        if basis.is_empty() {
            return Ok(WitnessOutcome::NoFeasibleDirection);
        }
        for _ in 0..WITNESS_SEARCH_DRAWS {
            let v = combine(&basis);
            let scale = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
            if zeros.iter().all(|&i| v[i] >= -1e-12 * scale) {
                direction = Some(v);
                break;
            }
            if zeros.is_empty() {
                break;
            }
        }
    }
    let Some(mut v) = direction else {
        return Ok(WitnessOutcome::NoFeasibleDirection);
    };

    let scale = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    if scale == 0.0 {
        return Ok(WitnessOutcome::NoFeasibleDirection);
    }
    v.iter_mut().for_each(|a| *a /= scale);
    for &i in &zeros {
        v[i] = v[i].max(0.0);
    }
    let max_step = (0..n)
        .filter(|&i| v[i] < 0.0)
        .map(|i| x[i] / -v[i])
        .fold(f64::INFINITY, f64::min);
    if !(max_step > 0.0) || !max_step.is_finite() {
        return Ok(WitnessOutcome::NoFeasibleDirection);
    }
    let step = 0.5 * max_step;
    let w = x
        .iter()
        .zip(&v)
        .map(|(&xi, &vi)| (xi + step * vi).max(0.0))
        .collect();
    Ok(WitnessOutcome::Found(DegenerateWitness {
        w,
        direction: v,
        step,
        max_step,
    }))
}

/// Every property reported for one scale of a network.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub nodes: usize,
    pub ei: f64,
    pub determinism: f64,
    pub degeneracy: f64,
    pub indeterminism: f64,
    pub entropy_rate: f64,
    pub global_efficiency: f64,
    pub mean_betweenness: f64,
    pub mean_eigenvector_centrality: f64,
    /// Mean betweenness over macro-nodes (groups of two or more) only.
    pub macro_node_betweenness: Option<f64>,
    pub macro_node_eigenvector_centrality: Option<f64>,
    pub communicability_entropy: f64,
    pub mean_degree: f64,
    pub degree_variance: f64,
    pub assortativity: Option<f64>,
    pub kernel_dimension: usize,
}

impl MetricsReport {
    /// Properties of `net`. When `partition` is given, `net` is taken to be the
    /// macroscale built from it and the macro-node columns are filled.
    pub fn compute(net: &Network, partition: Option<&Partition>) -> Result<Self> {
        if let Some(p) = partition {
            if p.group_count() != net.len() {
                return Err(Error::invalid(format!(
                    "partition has {} groups, macro network has {} nodes",
                    p.group_count(),
                    net.len()
                )));
            }
        }
        let ei = effective_information(net);
        let pi = net.stationary();
        let btw = betweenness(net);
        let evc = eigenvector_centrality(net);
        let (mean_degree, degree_variance) = degree_stats(net);
        let macro_nodes: Vec<usize> = partition
            .map(|p| {
                p.group_sizes()
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s >= 2)
                    .map(|(g, _)| g)
                    .collect()
            })
            .unwrap_or_default();
        let mean_over = |values: &[f64], idx: &[usize]| {
            (!idx.is_empty()).then(|| idx.iter().map(|&i| values[i]).sum::<f64>() / idx.len() as f64)
        };
        Ok(Self {
            nodes: net.len(),
            ei: ei.ei,
            determinism: ei.determinism,
            degeneracy: ei.degeneracy,
            indeterminism: ei.indeterminism,
            entropy_rate: entropy_rate(net, &pi),
            global_efficiency: global_efficiency(net),
            mean_betweenness: mean(&btw),
            mean_eigenvector_centrality: mean(&evc),
            macro_node_betweenness: mean_over(&btw, &macro_nodes),
            macro_node_eigenvector_centrality: mean_over(&evc, &macro_nodes),
            communicability_entropy: communicability_entropy(net),
            mean_degree,
            degree_variance,
            assortativity: assortativity(net),
            kernel_dimension: kernel_dimension(net, DEFAULT_KERNEL_TOL)?,
        })
    }
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}
