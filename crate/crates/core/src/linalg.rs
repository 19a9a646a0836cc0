//! Thin wrappers over faer for the dense decompositions used here.

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::graph::Network;

pub(crate) fn to_mat(net: &Network) -> Mat<f64> {
    let n = net.len();
    Mat::from_fn(n, n, |i, j| net.weight(i, j))
}

/// Eigenvalues and right eigenvectors (columns) of the weight matrix.
/// Reversible walks, such as those on undirected networks, go through a
/// symmetric solver, which is faster and returns an orthogonal basis inside
/// repeated eigenspaces.
pub fn eigen(net: &Network) -> Result<(Vec<c64>, Mat<c64>)> {
    match balancing_weights(net) {
        Some(d) => reversible_eigen(net, &d),
        None => general_eigen(net),
    }
}

/// Positive `d` with `d_i w_ij == d_j w_ji` on every pair, if there is one.
/// Walking the edges fixes `d` up to a factor per connected component.
fn balancing_weights(net: &Network) -> Option<Vec<f64>> {
    let n = net.len();
    let mut d = vec![0.0f64; n];
    let mut stack = Vec::new();
    for root in 0..n {
        if d[root] > 0.0 {
            continue;
        }
        d[root] = 1.0;
        stack.push(root);
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let (wij, wji) = (net.weight(i, j), net.weight(j, i));
                if wij == 0.0 && wji == 0.0 {
                    continue;
                }
                if wij == 0.0 || wji == 0.0 {
                    return None;
                }
                if d[j] == 0.0 {
                    d[j] = d[i] * wij / wji;
                    if !(d[j] > 1e-150 && d[j] < 1e150) {
                        return None;
                    }
                    stack.push(j);
                } else {
                    let (a, b) = (d[i] * wij, d[j] * wji);
                    if (a - b).abs() > 1e-10 * a.max(b) {
                        return None;
                    }
                }
            }
        }
    }
    Some(d)
}

fn reversible_eigen(net: &Network, d: &[f64]) -> Result<(Vec<c64>, Mat<c64>)> {
    let n = net.len();
    let root: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
    let half = |i: usize, j: usize| root[i] * net.weight(i, j) / root[j];
    let sym = Mat::from_fn(n, n, |i, j| 0.5 * (half(i, j) + half(j, i)));
    let evd = sym
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let values = (0..n).map(|k| c64::new(evd.S()[k], 0.0)).collect();
    let u = evd.U();
    let mut vectors = Mat::<c64>::zeros(n, n);
    for k in 0..n {
        let col: Vec<f64> = (0..n).map(|i| u[(i, k)] / root[i]).collect();
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        for i in 0..n {
            vectors[(i, k)] = c64::new(col[i] / norm, 0.0);
        }
    }
    Ok((values, vectors))
}

fn general_eigen(net: &Network) -> Result<(Vec<c64>, Mat<c64>)> {
    let m = to_mat(net);
    let evd = m.eigen().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let values: Vec<c64> = (0..net.len()).map(|k| evd.S()[k]).collect();
    let mut vectors = evd.U().to_owned();
    repair_eigenvectors(&m, &values, &mut vectors)?;
    Ok((values, vectors))
}

/// The eigensolver can return non-finite eigenvectors for repeated
/// eigenvalues. Those eigenspaces are recomputed as the null space of
/// `W - lambda I`.
fn repair_eigenvectors(m: &Mat<f64>, values: &[c64], vectors: &mut Mat<c64>) -> Result<()> {
    let n = values.len();
    let finite = |z: c64| z.re.is_finite() && z.im.is_finite();
    let bad: Vec<bool> = (0..n)
        .map(|k| (0..n).any(|i| !finite(vectors[(i, k)])))
        .collect();
    if !bad.contains(&true) {
        return Ok(());
    }
    let scale = values.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
    let mut done = vec![false; n];
    for k in 0..n {
        if !bad[k] || done[k] {
            continue;
        }
        let lambda = values[k];
        if !finite(lambda) {
            return Err(Error::Eigen(format!("non-finite eigenvalue {lambda}")));
        }
        let group: Vec<usize> = (0..n)
            .filter(|&j| (values[j] - lambda).norm() <= 1e-8 * scale)
            .collect();
        let basis: Vec<Vec<c64>> = if lambda.im.abs() <= 1e-12 * scale {
            let shifted = Mat::from_fn(n, n, |i, j| m[(i, j)] - if i == j { lambda.re } else { 0.0 });
            smallest_right_singular(shifted.as_ref(), group.len())?
                .into_iter()
                .map(|v| v.into_iter().map(|x| c64::new(x, 0.0)).collect())
                .collect()
        } else {
            let shifted = Mat::from_fn(n, n, |i, j| {
                c64::new(m[(i, j)], 0.0) - if i == j { lambda } else { c64::new(0.0, 0.0) }
            });
            let svd = shifted.svd().map_err(|e| Error::Svd(format!("{e:?}")))?;
            let s = svd.S().column_vector();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| s[a].re.total_cmp(&s[b].re));
            let v = svd.V();
            order[..group.len()]
                .iter()
                .map(|&c| (0..n).map(|i| v[(i, c)]).collect())
                .collect()
        };
        for (col, &j) in basis.iter().zip(&group) {
            for i in 0..n {
                vectors[(i, j)] = col[i];
            }
            done[j] = true;
        }
    }
    Ok(())
}

fn smallest_right_singular(m: MatRef<'_, f64>, count: usize) -> Result<Vec<Vec<f64>>> {
    let n = m.ncols();
    let svd = m.svd().map_err(|e| Error::Svd(format!("{e:?}")))?;
    let s = svd.S().column_vector();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
    let v = svd.V();
    Ok(order[..count]
        .iter()
        .map(|&c| (0..n).map(|i| v[(i, c)]).collect())
        .collect())
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let mut s = m
        .singular_values()
        .map_err(|e| Error::Svd(format!("{e:?}")))?;
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Numerical rank: singular values above `rel_tol * sigma_max`.
pub fn rank(m: MatRef<'_, f64>, rel_tol: f64) -> Result<usize> {
    let s = singular_values(m)?;
    let Some(&top) = s.first() else {
        return Ok(0);
    };
    if top == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > rel_tol * top).count())
}

/// Orthonormal basis of `{ v : m v = 0 }`, one vector per entry.
pub fn null_space(m: MatRef<'_, f64>, rel_tol: f64) -> Result<Vec<Vec<f64>>> {
    let cols = m.ncols();
    if cols == 0 {
        return Ok(Vec::new());
    }
    let svd = m.svd().map_err(|e| Error::Svd(format!("{e:?}")))?;
    let s = svd.S().column_vector();
    let top = (0..s.nrows()).map(|k| s[k]).fold(0.0f64, f64::max);
    let v = svd.V();
    let mut basis = Vec::new();
    for k in 0..cols {
        let sigma = if k < s.nrows() { s[k] } else { 0.0 };
        if sigma <= rel_tol * top || top == 0.0 {
            basis.push((0..cols).map(|i| v[(i, k)]).collect());
        }
    }
    Ok(basis)
}

/// Matrix exponential by scaling and squaring a truncated Taylor series.
pub fn expm(a: MatRef<'_, f64>) -> Mat<f64> {
    let n = a.nrows();
    let norm = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let scaled = Mat::from_fn(n, n, |i, j| a[(i, j)] * scale);
    // With ||A|| <= 1/2 the degree-18 tail is below 1e-24.
    let mut result = Mat::<f64>::identity(n, n);
    let mut term = Mat::<f64>::identity(n, n);
    for k in 1..=18 {
        term = &term * &scaled * (1.0 / k as f64);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
