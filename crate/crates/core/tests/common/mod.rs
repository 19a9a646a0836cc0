//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the library's EI or coarse-graining code.

#![allow(dead_code)]

use netscale::coarse::Partition;
use netscale::graph::Network;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rows(net: &Network) -> Vec<Vec<f64>> {
    (0..net.len()).map(|i| net.row(i).to_vec()).collect()
}

fn h(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

/// EI straight from the definition: entropy of the average out-row minus
/// the average out-row entropy, over rows that have any mass.
pub fn ei(rows: &[Vec<f64>]) -> f64 {
    let live: Vec<&Vec<f64>> = rows.iter().filter(|r| r.iter().any(|&x| x > 0.0)).collect();
    if live.is_empty() {
        return 0.0;
    }
    let k = live.len() as f64;
    let n = rows.len();
    let mean: Vec<f64> = (0..n).map(|j| live.iter().map(|r| r[j]).sum::<f64>() / k).collect();
    h(&mean) - live.iter().map(|r| h(r)).sum::<f64>() / k
}

/// Stationary distribution by plain lazy power iteration, with dangling rows
/// spreading their mass uniformly.
pub fn stationary(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let mut p = vec![1.0 / n as f64; n];
    for _ in 0..200_000 {
        let mut next = vec![0.0; n];
        for i in 0..n {
            let s: f64 = rows[i].iter().sum();
            for j in 0..n {
                next[j] += p[i] * if s > 0.0 { rows[i][j] } else { 1.0 / n as f64 };
            }
        }
        let lazy: Vec<f64> = p.iter().zip(&next).map(|(a, b)| 0.5 * (a + b)).collect();
        let diff: f64 = lazy.iter().zip(&p).map(|(a, b)| (a - b).abs()).sum();
        p = lazy;
        if diff < 1e-15 {
            break;
        }
    }
    p
}

/// Macro rows: the pi-weighted average of member rows, columns summed over
/// groups. Groups without stationary mass use a plain average.
pub fn macro_rows(rows: &[Vec<f64>], pi: &[f64], groups: &[Vec<usize>]) -> Vec<Vec<f64>> {
    let k = groups.len();
    let mut of = vec![0; rows.len()];
    for (g, members) in groups.iter().enumerate() {
        for &i in members {
            of[i] = g;
        }
    }
    groups
        .iter()
        .map(|members| {
            let mass: f64 = members.iter().map(|&i| pi[i]).sum();
            let mut out = vec![0.0; k];
            for &i in members {
                let share = if mass > 0.0 { pi[i] / mass } else { 1.0 / members.len() as f64 };
                for (j, &w) in rows[i].iter().enumerate() {
                    out[of[j]] += share * w;
                }
            }
            let s: f64 = out.iter().sum();
            if s > 0.0 {
                out.iter_mut().for_each(|x| *x /= s);
            }
            out
        })
        .collect()
}

/// Every set partition of `0..n`, as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    fn rec(i: usize, max: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == a.len() {
            out.push(a.clone());
            return;
        }
        for v in 0..=max + 1 {
            a[i] = v;
            rec(i + 1, max.max(v), a, out);
        }
    }
    if n > 0 {
        rec(1, 0, &mut a, &mut out);
    }
    out
}

pub fn groups_of(assign: &[usize]) -> Vec<Vec<usize>> {
    let k = assign.iter().max().map_or(0, |m| m + 1);
    let mut g = vec![Vec::new(); k];
    for (i, &a) in assign.iter().enumerate() {
        g[a].push(i);
    }
    g
}

/// Largest causal emergence over all partitions, and one partition reaching it.
pub fn best_partition(net: &Network) -> (f64, Vec<usize>) {
    let r = rows(net);
    let pi = stationary(&r);
    let micro = ei(&r);
    let mut best = (0.0, (0..net.len()).collect::<Vec<_>>());
    for assign in set_partitions(net.len()) {
        let ce = ei(&macro_rows(&r, &pi, &groups_of(&assign))) - micro;
        if ce > best.0 + 1e-12 {
            best = (ce, assign);
        }
    }
    best
}

pub fn causal_emergence(net: &Network, part: &Partition) -> f64 {
    let r = rows(net);
    let pi = stationary(&r);
    ei(&macro_rows(&r, &pi, &part.groups())) - ei(&r)
}

fn random_row(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(0.4) { rng.random_range(0.1..1.0) } else { 0.0 })
        .collect();
    if row.iter().all(|&x| x == 0.0) {
        row[rng.random_range(0..n)] = 1.0;
    }
    row
}

/// Small networks whose rows are copies of one to three prototypes, some of
/// them perturbed, so that informative macroscales are common but not
/// guaranteed.
pub fn random_net(seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(4..=6);
    let k = rng.random_range(1..=3);
    let protos: Vec<Vec<f64>> = (0..k).map(|_| random_row(&mut rng, n)).collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let mut r = protos[rng.random_range(0..k)].clone();
            if rng.random_bool(0.4) {
                let j = rng.random_range(0..n);
                r[j] += rng.random_range(0.1..1.0);
            }
            r
        })
        .collect();
    Network::from_rows(&rows).unwrap().normalize()
}

/// Dense random network with every row nonempty.
pub fn dense_net(seed: u64, n: usize) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| random_row(&mut rng, n)).collect();
    Network::from_rows(&rows).unwrap().normalize()
}

/// Four nodes walking uniformly inside a clique plus one node on a self-loop.
pub fn clique_and_loop() -> Network {
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            edges.push((i, j, 0.25));
        }
    }
    edges.push((4, 4, 1.0));
    Network::from_edges(5, edges).unwrap()
}

pub fn directed_cycle(n: usize) -> Network {
    Network::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0))).unwrap()
}
