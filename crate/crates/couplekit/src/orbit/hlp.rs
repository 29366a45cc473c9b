//! Explicit orbit operators on `{l_1, l_inf}`: when the partial sums of
//! `b*` are dominated by those of `a*`, a doubly substochastic matrix with
//! `Ta = b` is assembled as
//! `signed permutation . T-transform chain . contraction diagonal . signed
//! permutation`, with at most `n - 1` T-transforms.

use crate::couple::Couple;
use crate::error::OrbitError;
use crate::structure::LinearMap;

#[derive(Debug, Clone, Copy)]
pub struct HlpCertificate {
    pub max_col_sum: f64,
    pub max_row_sum: f64,
    pub reconstruction_error: f64,
    pub t_transform_count: usize,
}

#[derive(Debug, Clone)]
pub struct HlpOperator {
    pub map: LinearMap,
    pub certificate: HlpCertificate,
}

/// Stable descending order of `|v|`, ties by original index.
fn sort_order(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[j].abs().partial_cmp(&v[i].abs()).unwrap().then(i.cmp(&j)));
    idx
}

/// Checks the majorization precondition: every prefix sum of `b*` at most
/// the matching prefix sum of `a*`. Returns the first violating prefix
/// length as a witness (it is a violating `t` for the K-curves).
fn check_domination(a_sorted: &[f64], b_sorted: &[f64]) -> Result<(), OrbitError> {
    let n = a_sorted.len().max(b_sorted.len());
    let scale = a_sorted
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(b_sorted.first().copied().unwrap_or(0.0));
    let mut pa = 0.0;
    let mut pb = 0.0;
    for k in 0..n {
        pa += a_sorted.get(k).copied().unwrap_or(0.0);
        pb += b_sorted.get(k).copied().unwrap_or(0.0);
        if pb > pa + 1e-12 * scale.max(1.0) {
            return Err(OrbitError::DominationViolated {
                witness: (k + 1) as f64,
                lhs: pb,
                rhs: pa,
            });
        }
    }
    Ok(())
}

pub fn hlp_construct(a: &[f64], b: &[f64]) -> Result<HlpOperator, OrbitError> {
    let na = a.len();
    let nb = b.len();
    let n = na.max(nb).max(1);
    let mut a_pad = a.to_vec();
    a_pad.resize(n, 0.0);
    let mut b_pad = b.to_vec();
    b_pad.resize(n, 0.0);

    let order_a = sort_order(&a_pad);
    let order_b = sort_order(&b_pad);
    let a_sorted: Vec<f64> = order_a.iter().map(|&i| a_pad[i].abs()).collect();
    let b_sorted: Vec<f64> = order_b.iter().map(|&i| b_pad[i].abs()).collect();
    check_domination(&a_sorted, &b_sorted)?;

    // Contraction fill: c = a* truncated so its total matches b*'s; the
    // prefix sums become min(prefix a*, total b*), still above b*'s.
    let total_b: f64 = b_sorted.iter().sum();
    let mut remaining = total_b;
    let mut c: Vec<f64> = Vec::with_capacity(n);
    let mut contraction: Vec<f64> = Vec::with_capacity(n);
    for &av in &a_sorted {
        let take = av.min(remaining).max(0.0);
        remaining -= take;
        c.push(take);
        contraction.push(if av > 0.0 { take / av } else { 0.0 });
    }

    // T-transform chain from c to b* (equal sums, b* majorized by c).
    let mut core = identity(n);
    let scale = a_sorted.first().copied().unwrap_or(0.0).max(1.0);
    let eps = 1e-13 * scale;
    let mut count = 0usize;
    loop {
        let Some(j) = (0..n).find(|&i| c[i] > b_sorted[i] + eps) else {
            break;
        };
        let Some(k) = ((j + 1)..n).find(|&i| c[i] < b_sorted[i] - eps) else {
            break;
        };
        let delta = (c[j] - b_sorted[j]).min(b_sorted[k] - c[k]);
        let lambda = delta / (c[j] - c[k]);
        // Left-multiply by (1 - lambda) I + lambda Q_{jk}.
        for col in 0..n {
            let rj = core[j * n + col];
            let rk = core[k * n + col];
            core[j * n + col] = (1.0 - lambda) * rj + lambda * rk;
            core[k * n + col] = lambda * rj + (1.0 - lambda) * rk;
        }
        c[j] -= delta;
        c[k] += delta;
        count += 1;
        if count > 2 * n {
            break;
        }
    }

    // Assemble P_b^T . core . diag(contraction) . P_a on the padded space.
    let mut t_pad = vec![0.0; n * n];
    for row in 0..n {
        // (core . D . P_a)[row, col]: P_a maps original index order_a[k] to
        // slot k with the sign of a.
        for k in 0..n {
            let src = order_a[k];
            let sign_a = if a_pad[src] < 0.0 { -1.0 } else { 1.0 };
            t_pad[row * n + src] = core[row * n + k] * contraction[k] * sign_a;
        }
    }
    // P_b^T: slot row of the sorted space goes back to original index
    // order_b[row], with b's sign.
    let mut full = vec![0.0; n * n];
    for row in 0..n {
        let dst = order_b[row];
        let sign_b = if b_pad[dst] < 0.0 { -1.0 } else { 1.0 };
        for col in 0..n {
            full[dst * n + col] = sign_b * t_pad[row * n + col];
        }
    }

    // Crop to the requested shape; row/column sums only shrink.
    let mut matrix = vec![0.0; nb * na];
    for i in 0..nb {
        for j in 0..na {
            matrix[i * na + j] = full[i * n + j];
        }
    }
    let map = LinearMap::new(matrix, Couple::l1_linf(na), Couple::l1_linf(nb))
        .expect("shape is consistent by construction");
    let ta = map.apply(a);
    let recon = ta
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let mut max_col = 0.0f64;
    for j in 0..na {
        max_col = max_col.max((0..nb).map(|i| map.entry(i, j).abs()).sum());
    }
    let mut max_row = 0.0f64;
    for i in 0..nb {
        max_row = max_row.max((0..na).map(|j| map.entry(i, j).abs()).sum());
    }
    Ok(HlpOperator {
        map,
        certificate: HlpCertificate {
            max_col_sum: max_col,
            max_row_sum: max_row,
            reconstruction_error: recon,
            t_transform_count: count,
        },
    })
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}
