//! Coarse-graining relaxed to a soft assignment of nodes to macro slots and
//! optimized by gradient ascent with momentum.
//!
//! With `M` the row-softmax of the logits, the soft macro transition matrix
//! is `W_M = rownorm(M^T diag(pi) W M)`, which reduces to the hard
//! stationary-weighted macro-node construction when `M` is one-hot. The
//! stationary distribution is held fixed while differentiating.

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::coarse::{causal_emergence_with, coarse_grain, MacroResult, Partition};
use crate::ei::{effective_information, entropy_bits};
use crate::error::{Error, Result};
use crate::graph::{Network, StationaryDistribution};
use crate::linalg;

/// Slots whose total membership is at most this are left out of the EI.
pub const DEFAULT_MASS_TOL: f64 = 1e-6;

const CONVERGE_WINDOW: usize = 50;

/// Row-major `n x n` logits and the matching row-softmax probabilities;
/// `prob(i, mu)` is the probability that node `i` belongs to slot `mu`.
#[derive(Clone, Debug, PartialEq)]
pub struct SoftAssignment {
    n: usize,
    logits: Vec<f64>,
    probs: Vec<f64>,
}

impl SoftAssignment {
    pub fn from_logits(n: usize, logits: Vec<f64>) -> Result<Self> {
        if logits.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {} logits, got {}",
                n * n,
                logits.len()
            )));
        }
        if logits.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("logits must be finite"));
        }
        let probs = softmax_rows(n, &logits);
        Ok(Self { n, logits, probs })
    }

    /// One-hot-like assignment of node `i` to slot `part.group_of(i)`, with
    /// the chosen slot `strength` logits above the rest.
    pub fn from_partition(part: &Partition, strength: f64) -> Self {
        let n = part.len();
        let mut logits = vec![0.0; n * n];
        for i in 0..n {
            logits[i * n + part.group_of(i)] = strength;
        }
        let probs = softmax_rows(n, &logits);
        Self { n, logits, probs }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn logits(&self) -> &[f64] {
        &self.logits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize, slot: usize) -> f64 {
        self.probs[i * self.n + slot]
    }

    /// Each node goes to its most probable slot (lowest slot on ties).
    pub fn harden(&self) -> Partition {
        let n = self.n;
        let raw = (0..n)
            .map(|i| {
                let row = &self.logits[i * n..(i + 1) * n];
                (0..n).fold(0, |best, k| if row[k] > row[best] { k } else { best })
            })
            .collect();
        Partition::from_assignment(raw).expect("slots are below n")
    }
}

fn softmax_rows(n: usize, logits: &[f64]) -> Vec<f64> {
    let mut probs = vec![0.0; n * n];
    for i in 0..n {
        let row = &logits[i * n..(i + 1) * n];
        let top = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let out = &mut probs[i * n..(i + 1) * n];
        let mut total = 0.0;
        for (o, &x) in out.iter_mut().zip(row) {
            *o = (x - top).exp();
            total += *o;
        }
        out.iter_mut().for_each(|o| *o /= total);
    }
    probs
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    pub max_iter: usize,
    pub restarts: usize,
    /// Standard deviation of the random initial logits.
    pub init_scale: f64,
    /// Stop once soft EI moves less than this over a 50-iteration window.
    pub converge_tol: f64,
    pub mass_tol: f64,
    pub seed: u64,
}

impl Default for GradConfig {
    fn default() -> Self {
        Self {
            learning_rate: 2.0,
            momentum: 0.9,
            max_iter: 2000,
            restarts: 5,
            init_scale: 0.1,
            converge_tol: 1e-8,
            mass_tol: DEFAULT_MASS_TOL,
            seed: 0,
        }
    }
}

impl GradConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::invalid("learning_rate must be positive"));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::invalid("momentum must lie in [0, 1)"));
        }
        if !(self.mass_tol >= 0.0) {
            return Err(Error::invalid("mass_tol must be nonnegative"));
        }
        if self.restarts < 1 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        if !(self.init_scale >= 0.0) || !self.init_scale.is_finite() {
            return Err(Error::invalid("init_scale must be finite and nonnegative"));
        }
        if !(self.converge_tol >= 0.0) {
            return Err(Error::invalid("converge_tol must be nonnegative"));
        }
        Ok(())
    }
}

/// Soft EI of `assign`, in bits.
pub fn soft_ei(net: &Network, pi: &StationaryDistribution, assign: &SoftAssignment) -> Result<f64> {
    check(net, pi, assign)?;
    let w = linalg::to_mat(net);
    Ok(evaluate(&w, &pi.pi, assign, DEFAULT_MASS_TOL, false).0)
}

/// Soft EI and its gradient with respect to the logits (row-major `n x n`).
pub fn soft_ei_gradient(
    net: &Network,
    pi: &StationaryDistribution,
    assign: &SoftAssignment,
    mass_tol: f64,
) -> Result<(f64, Vec<f64>)> {
    check(net, pi, assign)?;
    let w = linalg::to_mat(net);
    Ok(evaluate(&w, &pi.pi, assign, mass_tol, true))
}

fn check(net: &Network, pi: &StationaryDistribution, assign: &SoftAssignment) -> Result<()> {
    if assign.len() != net.len() || pi.len() != net.len() {
        return Err(Error::invalid(format!(
            "assignment covers {} nodes and stationary distribution {}, network has {}",
            assign.len(),
            pi.len(),
            net.len()
        )));
    }
    Ok(())
}

fn evaluate(
    w: &Mat<f64>,
    pi: &[f64],
    assign: &SoftAssignment,
    mass_tol: f64,
    want_grad: bool,
) -> (f64, Vec<f64>) {
    let n = assign.n;
    let m = Mat::from_fn(n, n, |i, k| assign.probs[i * n + k]);
    let t = w * &m;
    let q = Mat::from_fn(n, n, |i, k| pi[i] * m[(i, k)]);
    let u = q.transpose() * &t;

    let row_sum: Vec<f64> = (0..n).map(|mu| (0..n).map(|nu| u[(mu, nu)]).sum()).collect();
    let slots: Vec<usize> = (0..n)
        .filter(|&mu| {
            let mass: f64 = (0..n).map(|i| m[(i, mu)]).sum();
            mass > mass_tol && row_sum[mu] > 0.0
        })
        .collect();
    if slots.is_empty() {
        return (0.0, vec![0.0; n * n]);
    }
    let k = slots.len() as f64;
    let rows: Vec<Vec<f64>> = slots
        .iter()
        .map(|&mu| (0..n).map(|nu| u[(mu, nu)] / row_sum[mu]).collect())
        .collect();
    let mut mean = vec![0.0; n];
    for r in &rows {
        for (a, &b) in mean.iter_mut().zip(r) {
            *a += b / k;
        }
    }
    let ei = entropy_bits(mean.iter().copied())
        - rows.iter().map(|r| entropy_bits(r.iter().copied())).sum::<f64>() / k;
    if !want_grad {
        return (ei, Vec::new());
    }

    // Backward pass: through the row normalization, then U = Q^T T with
    // Q = diag(pi) M and T = W M, then the row softmax.
    const FLOOR: f64 = 1e-300;
    let log_mean: Vec<f64> = mean.iter().map(|&p| p.max(FLOOR).log2()).collect();
    let mut g_u = Mat::<f64>::zeros(n, n);
    for (r, &mu) in rows.iter().zip(&slots) {
        let g_r: Vec<f64> = (0..n)
            .map(|nu| (r[nu].max(FLOOR).log2() - log_mean[nu]) / k)
            .collect();
        let dot: f64 = g_r.iter().zip(r).map(|(a, b)| a * b).sum();
        for nu in 0..n {
            g_u[(mu, nu)] = (g_r[nu] - dot) / row_sum[mu];
        }
    }
    let g_q = &t * g_u.transpose();
    let g_t = &q * &g_u;
    let g_m_walk = w.transpose() * &g_t;
    let mut grad = vec![0.0; n * n];
    for i in 0..n {
        let g_m: Vec<f64> = (0..n).map(|c| pi[i] * g_q[(i, c)] + g_m_walk[(i, c)]).collect();
        let avg: f64 = (0..n).map(|c| m[(i, c)] * g_m[c]).sum();
        for c in 0..n {
            grad[i * n + c] = m[(i, c)] * (g_m[c] - avg);
        }
    }
    (ei, grad)
}

/// Outcome of [`gradient_search_report`].
#[derive(Clone, Debug, PartialEq)]
pub struct GradientReport {
    pub result: MacroResult,
    /// Exact causal emergence of each restart's hardened partition; `None`
    /// for restarts aborted on a non-finite gradient.
    pub restart_gains: Vec<Option<f64>>,
    pub aborted_restarts: usize,
}

pub fn gradient_search(net: &Network, cfg: &GradConfig) -> Result<MacroResult> {
    gradient_search_report(net, cfg).map(|r| r.result)
}

pub fn gradient_search_report(net: &Network, cfg: &GradConfig) -> Result<GradientReport> {
    cfg.validate()?;
    let n = net.len();
    if n < 2 {
        return Err(Error::invalid("gradient search needs at least two nodes"));
    }
    let pi = net.stationary();
    let w = linalg::to_mat(net);
    let ei_micro = effective_information(net).ei;
    let mut best: Option<(f64, Partition)> = None;
    let mut gains = Vec::with_capacity(cfg.restarts);
    let mut aborted = 0;
    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
        let logits = (0..n * n)
            .map(|_| cfg.init_scale * Distribution::<f64>::sample(&StandardNormal, &mut rng))
            .collect();
        let Some(assign) = ascend(&w, &pi.pi, SoftAssignment::from_logits(n, logits)?, cfg) else {
            aborted += 1;
            gains.push(None);
            continue;
        };
        let part = assign.harden();
        let gain = effective_information(&coarse_grain(net, &pi, &part)?).ei - ei_micro;
        gains.push(Some(gain));
        if gain > best.as_ref().map_or(1e-12, |b| b.0) {
            best = Some((gain, part));
        }
    }
    let part = best.map_or_else(|| Partition::identity(n), |b| b.1);
    Ok(GradientReport {
        result: causal_emergence_with(net, &pi, &part)?,
        restart_gains: gains,
        aborted_restarts: aborted,
    })
}

/// Momentum ascent on soft EI; `None` if a non-finite value shows up.
fn ascend(w: &Mat<f64>, pi: &[f64], mut assign: SoftAssignment, cfg: &GradConfig) -> Option<SoftAssignment> {
    let n = assign.n;
    let mut velocity = vec![0.0; n * n];
    let mut history = Vec::with_capacity(cfg.max_iter.min(4096));
    for it in 0..cfg.max_iter {
        let (ei, grad) = evaluate(w, pi, &assign, cfg.mass_tol, true);
        if !ei.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return None;
        }
        history.push(ei);
        if it >= CONVERGE_WINDOW && (ei - history[it - CONVERGE_WINDOW]).abs() < cfg.converge_tol {
            break;
        }
        for ((v, l), g) in velocity.iter_mut().zip(assign.logits.iter_mut()).zip(&grad) {
            *v = cfg.momentum * *v + cfg.learning_rate * g;
            *l += *v;
        }
        assign.probs = softmax_rows(n, &assign.logits);
    }
    Some(assign)
}
