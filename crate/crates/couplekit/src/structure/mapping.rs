//! Linear maps between couples: per-side operator norms (exact closed forms
//! where they exist, certified intervals elsewhere), the sampled lower bound
//! for the K-domination norm, and retract verification.

use crate::couple::{weighted_norm, Couple, Exponent, Side};
use crate::error::StructureError;
use crate::kfun;

/// A dense matrix mapping the source couple's coordinate space into the
/// target's, stored row-major.
#[derive(Debug, Clone)]
pub struct LinearMap {
    matrix: Vec<f64>,
    source: Couple,
    target: Couple,
}

impl LinearMap {
    pub fn new(matrix: Vec<f64>, source: Couple, target: Couple) -> Result<Self, StructureError> {
        if matrix.len() != source.len() * target.len() {
            return Err(StructureError::ShapeMismatch {
                rows: matrix.len() / source.len().max(1),
                cols: source.len(),
                source_len: source.len(),
                target_len: target.len(),
            });
        }
        Ok(LinearMap {
            matrix,
            source,
            target,
        })
    }

    pub fn from_rows(
        rows: &[Vec<f64>],
        source: Couple,
        target: Couple,
    ) -> Result<Self, StructureError> {
        let mut matrix = Vec::with_capacity(source.len() * target.len());
        if rows.len() != target.len() {
            return Err(StructureError::ShapeMismatch {
                rows: rows.len(),
                cols: source.len(),
                source_len: source.len(),
                target_len: target.len(),
            });
        }
        for r in rows {
            if r.len() != source.len() {
                return Err(StructureError::ShapeMismatch {
                    rows: rows.len(),
                    cols: r.len(),
                    source_len: source.len(),
                    target_len: target.len(),
                });
            }
            matrix.extend_from_slice(r);
        }
        Ok(LinearMap {
            matrix,
            source,
            target,
        })
    }

    pub fn identity(couple: &Couple) -> Self {
        let n = couple.len();
        let mut matrix = vec![0.0; n * n];
        for i in 0..n {
            matrix[i * n + i] = 1.0;
        }
        LinearMap {
            matrix,
            source: couple.clone(),
            target: couple.clone(),
        }
    }

    pub fn scaled_identity(couple: &Couple, c: f64) -> Self {
        let mut t = LinearMap::identity(couple);
        for x in &mut t.matrix {
            *x *= c;
        }
        t
    }

    pub fn source(&self) -> &Couple {
        &self.source
    }

    pub fn target(&self) -> &Couple {
        &self.target
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.source.len() + j]
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn apply(&self, a: &[f64]) -> Vec<f64> {
        let (m, n) = (self.rows(), self.cols());
        debug_assert_eq!(a.len(), n);
        let mut out = vec![0.0; m];
        for i in 0..m {
            let row = &self.matrix[i * n..(i + 1) * n];
            out[i] = row.iter().zip(a).map(|(t, x)| t * x).sum();
        }
        out
    }

    /// `self` after `inner`: the map `a -> self(inner(a))`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap, StructureError> {
        if inner.rows() != self.cols() {
            return Err(StructureError::ShapeMismatch {
                rows: self.rows(),
                cols: self.cols(),
                source_len: inner.rows(),
                target_len: self.rows(),
            });
        }
        let (m, k, n) = (self.rows(), self.cols(), inner.cols());
        let mut matrix = vec![0.0; m * n];
        for i in 0..m {
            for l in 0..k {
                let t = self.matrix[i * k + l];
                if t == 0.0 {
                    continue;
                }
                for j in 0..n {
                    matrix[i * n + j] += t * inner.matrix[l * n + j];
                }
            }
        }
        Ok(LinearMap {
            matrix,
            source: inner.source.clone(),
            target: self.target.clone(),
        })
    }
}

/// A certified two-sided bound on an operator norm. `lower == upper` up to
/// rounding for the closed-form exponent pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBound {
    pub lower: f64,
    pub upper: f64,
}

impl NormBound {
    fn exact(v: f64) -> Self {
        NormBound { lower: v, upper: v }
    }

    pub fn is_exact(&self) -> bool {
        self.upper - self.lower <= 1e-11 * self.upper.abs().max(1.0)
    }
}

/// The operator norm of one side, `l_p(source w) -> l_q(target w)`.
///
/// Exact cases: source exponent 1 (column norms), target exponent `inf`
/// (dual norms of the rows), and the 2 -> 2 case (largest singular value of
/// the weighted matrix, certified by a Gershgorin interval). Everything else
/// gets a certified interval from probe vectors below and a Holder bound
/// above.
pub fn side_operator_norm(t: &LinearMap, side: Side) -> NormBound {
    let (m, n) = (t.rows(), t.cols());
    let wa = t.source.weights(side);
    let wb = t.target.weights(side);
    let pa = t.source.exponent(side);
    let pb = t.target.exponent(side);

    if pa == Exponent::Finite(1.0) {
        let mut best = 0.0f64;
        for j in 0..n {
            let col: Vec<f64> = (0..m).map(|i| t.entry(i, j)).collect();
            best = best.max(weighted_norm(wb, &col, pb) / wa[j]);
        }
        return NormBound::exact(best);
    }
    if pb == Exponent::Infinity {
        // sup over the unit ball of a row functional: the dual norm of the
        // reweighted row.
        let dual = pa.conjugate();
        let mut best = 0.0f64;
        for i in 0..m {
            let row: Vec<f64> = (0..n).map(|j| t.entry(i, j) / wa[j]).collect();
            best = best.max(wb[i] * weighted_norm(&vec![1.0; n], &row, dual));
        }
        return NormBound::exact(best);
    }
    if pa == Exponent::Finite(2.0) && pb == Exponent::Finite(2.0) {
        let mut weighted = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                weighted[i * n + j] = wb[i] * t.entry(i, j) / wa[j];
            }
        }
        let (lo, hi) = spectral_norm_interval(&weighted, m, n);
        return NormBound {
            lower: lo,
            upper: hi,
        };
    }

    // Interval: probe vectors below, Holder on columns above.
    let mut lower = 0.0f64;
    let mut probes: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|l| if l == j { 1.0 } else { 0.0 }).collect())
        .collect();
    probes.push(vec![1.0; n]);
    probes.push(
        (0..n)
            .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
    );
    for x in &probes {
        let sx = weighted_norm(wa, x, pa);
        if sx > 0.0 {
            lower = lower.max(weighted_norm(wb, &t.apply(x), pb) / sx);
        }
    }
    let colnorms: Vec<f64> = (0..n)
        .map(|j| {
            let col: Vec<f64> = (0..m).map(|i| t.entry(i, j)).collect();
            weighted_norm(wb, &col, pb) / wa[j]
        })
        .collect();
    let upper = weighted_norm(&vec![1.0; n], &colnorms, pa.conjugate());
    NormBound {
        lower,
        upper: upper.max(lower),
    }
}

/// Largest singular value of a dense `m x n` matrix via Jacobi iteration on
/// the Gram matrix, returned as a certified interval.
fn spectral_norm_interval(a: &[f64], m: usize, n: usize) -> (f64, f64) {
    // Work with the smaller Gram matrix.
    let k = n.min(m);
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            let mut s = 0.0;
            for l in 0..m.max(n) {
                let (x, y) = if n <= m {
                    (a[l * n + i], a[l * n + j])
                } else {
                    (a[i * n + l], a[j * n + l])
                };
                s += x * y;
            }
            g[i * k + j] = s;
        }
    }
    // Jacobi sweeps.
    for _ in 0..60 {
        let mut off = 0.0f64;
        for p in 0..k {
            for q in (p + 1)..k {
                off = off.max(g[p * k + q].abs());
            }
        }
        let scale = (0..k).map(|i| g[i * k + i].abs()).fold(0.0f64, f64::max);
        if off <= 1e-15 * scale.max(1e-300) {
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = g[p * k + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = 0.5 * (g[q * k + q] - g[p * k + p]) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..k {
                    let gip = g[i * k + p];
                    let giq = g[i * k + q];
                    g[i * k + p] = c * gip - s * giq;
                    g[i * k + q] = s * gip + c * giq;
                }
                for i in 0..k {
                    let gpi = g[p * k + i];
                    let gqi = g[q * k + i];
                    g[p * k + i] = c * gpi - s * gqi;
                    g[q * k + i] = s * gpi + c * gqi;
                }
            }
        }
    }
    let mut lam = 0.0f64;
    let mut slack = 0.0f64;
    for i in 0..k {
        let d = g[i * k + i];
        let off: f64 = (0..k).filter(|&j| j != i).map(|j| g[i * k + j].abs()).sum();
        if d + off > lam + slack {
            lam = d;
            slack = off;
        }
    }
    ((lam - slack).max(0.0).sqrt(), (lam + slack).max(0.0).sqrt())
}

/// `||T||_l` = the larger of the two per-side operator norms.
pub fn operator_norm_l(t: &LinearMap) -> NormBound {
    let b0 = side_operator_norm(t, Side::Zero);
    let b1 = side_operator_norm(t, Side::One);
    NormBound {
        lower: b0.lower.max(b1.lower),
        upper: b0.upper.max(b1.upper),
    }
}

/// A certified lower bound for the K-domination norm `||T||_b`: the largest
/// observed ratio `K(t, Ta; B) / K(t, a; A)` over the sample elements and
/// the t-grid. Samples with identically zero K are skipped.
pub fn operator_norm_b_lower(t: &LinearMap, samples: &[Vec<f64>], t_grid: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for a in samples {
        if a.iter().all(|&x| x == 0.0) {
            continue;
        }
        let ta = t.apply(a);
        for &s in t_grid {
            let denom = kfun::k(&t.source, a, s).unwrap_or(f64::NAN);
            let numer = kfun::k(&t.target, &ta, s).unwrap_or(f64::NAN);
            if denom > 0.0 && numer.is_finite() {
                best = best.max(numer / denom);
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetractCategory {
    /// Exact linear category: both per-side norms at most 1.
    L,
    /// Exact bounded category: sampled K-domination bound at most 1.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetractClause {
    NotIdentity,
    AlphaNorm,
    BetaNorm,
}

#[derive(Debug, Clone, Copy)]
pub struct RetractReport {
    pub ok: bool,
    pub failed: Option<RetractClause>,
}

/// Verifies `beta . alpha = id` exactly (1e-12 relative) and the norm
/// conditions of the requested category. For the `b` category the norm
/// check is the sampled lower bound against `1 + 1e-9`, with coordinate
/// atoms and a couple of mixed probes as the default corpus.
pub fn retract_check(
    alpha: &LinearMap,
    beta: &LinearMap,
    category: RetractCategory,
) -> Result<RetractReport, StructureError> {
    let composed = beta.compose(alpha)?;
    let n = composed.cols();
    if composed.rows() != n {
        return Ok(RetractReport {
            ok: false,
            failed: Some(RetractClause::NotIdentity),
        });
    }
    let scale = composed.matrix.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { 1.0 } else { 0.0 };
            if (composed.entry(i, j) - want).abs() > 1e-12 * scale {
                return Ok(RetractReport {
                    ok: false,
                    failed: Some(RetractClause::NotIdentity),
                });
            }
        }
    }
    let check = |t: &LinearMap| -> bool {
        match category {
            RetractCategory::L => operator_norm_l(t).upper <= 1.0 + 1e-9,
            RetractCategory::B => {
                let mut samples: Vec<Vec<f64>> = (0..t.cols())
                    .map(|j| {
                        (0..t.cols())
                            .map(|l| if l == j { 1.0 } else { 0.0 })
                            .collect()
                    })
                    .collect();
                samples.push(vec![1.0; t.cols()]);
                samples.push((0..t.cols()).map(|j| 1.0 / (j + 1) as f64).collect());
                let grid: Vec<f64> = (-6..=6).map(|k| 2.0f64.powi(k)).collect();
                operator_norm_b_lower(t, &samples, &grid) <= 1.0 + 1e-9
            }
        }
    };
    if !check(alpha) {
        return Ok(RetractReport {
            ok: false,
            failed: Some(RetractClause::AlphaNorm),
        });
    }
    if !check(beta) {
        return Ok(RetractReport {
            ok: false,
            failed: Some(RetractClause::BetaNorm),
        });
    }
    Ok(RetractReport {
        ok: true,
        failed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rel_err;

    #[test]
    fn norms_of_simple_maps() {
        let c = Couple::l1_linf(2);
        let t = LinearMap::scaled_identity(&c, 2.0);
        let b = operator_norm_l(&t);
        assert!(b.is_exact() && rel_err(b.upper, 2.0) < 1e-12);

        let avg =
            LinearMap::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]], c.clone(), c.clone()).unwrap();
        let b = operator_norm_l(&avg);
        assert!(b.is_exact() && rel_err(b.upper, 1.0) < 1e-12);

        let zero = LinearMap::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]], c.clone(), c).unwrap();
        assert_eq!(operator_norm_l(&zero).upper, 0.0);
    }

    #[test]
    fn spectral_case_matches_hand_svd() {
        let e2 = Exponent::Finite(2.0);
        let c = Couple::new(2, vec![1.0, 1.0], vec![1.0, 1.0], e2, e2).unwrap();
        // Diagonal (3, 1) has spectral norm 3.
        let t =
            LinearMap::from_rows(&[vec![3.0, 0.0], vec![0.0, 1.0]], c.clone(), c.clone()).unwrap();
        let b = side_operator_norm(&t, Side::Zero);
        assert!(b.is_exact(), "{b:?}");
        assert!(rel_err(b.upper, 3.0) < 1e-10);
        // Rank-one [[1,1],[1,1]] has spectral norm 2.
        let t = LinearMap::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]], c.clone(), c).unwrap();
        let b = side_operator_norm(&t, Side::One);
        assert!(rel_err(b.upper, 2.0) < 1e-9, "{b:?}");
    }

    #[test]
    fn b_lower_bound_for_scalings() {
        let c = Couple::l1_linf(3);
        let samples = vec![vec![1.0, 0.0, 0.0], vec![3.0, 1.0, 2.0]];
        let grid = [0.5, 1.0, 2.0];
        let id = LinearMap::identity(&c);
        assert!(rel_err(operator_norm_b_lower(&id, &samples, &grid), 1.0) < 1e-9);
        let twice = LinearMap::scaled_identity(&c, 2.0);
        assert!(rel_err(operator_norm_b_lower(&twice, &samples, &grid), 2.0) < 1e-9);
    }

    #[test]
    fn retract_identity_and_failures() {
        let c = Couple::l1_linf(2);
        let id = LinearMap::identity(&c);
        for cat in [RetractCategory::L, RetractCategory::B] {
            let r = retract_check(&id, &id, cat).unwrap();
            assert!(r.ok);
        }
        let twice = LinearMap::scaled_identity(&c, 2.0);
        let r = retract_check(&twice, &id, RetractCategory::L).unwrap();
        assert_eq!(r.failed, Some(RetractClause::NotIdentity));

        // beta . alpha = id but alpha is an expansion.
        let half = LinearMap::scaled_identity(&c, 0.5);
        let r = retract_check(&twice, &half, RetractCategory::L).unwrap();
        assert_eq!(r.failed, Some(RetractClause::AlphaNorm));
    }

    #[test]
    fn multiplicative_norm_inequality_closed_forms() {
        let c = Couple::l1_linf(3);
        let s = LinearMap::from_rows(
            &[
                vec![0.2, 0.5, 0.0],
                vec![0.1, 0.0, 0.9],
                vec![0.0, 0.3, 0.1],
            ],
            c.clone(),
            c.clone(),
        )
        .unwrap();
        let t = LinearMap::from_rows(
            &[
                vec![0.7, 0.0, 0.1],
                vec![0.2, 0.4, 0.0],
                vec![0.0, 0.1, 0.5],
            ],
            c.clone(),
            c,
        )
        .unwrap();
        let st = s.compose(&t).unwrap();
        let (ns, nt, nst) = (
            operator_norm_l(&s),
            operator_norm_l(&t),
            operator_norm_l(&st),
        );
        assert!(ns.is_exact() && nt.is_exact() && nst.is_exact());
        assert!(nst.upper <= ns.upper * nt.upper * (1.0 + 1e-12));
    }
}
