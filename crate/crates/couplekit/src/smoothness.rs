//! Grid-sampled smoothness couple: modulus of continuity, the sup-quotient
//! K-formula for `{C^0, C^1}`, the concave-majorant comparison, and the
//! difference embedding into a weighted sup-norm pair.
//!
//! The real line is replaced by the uniform grid `x_i = i h`, so every
//! supremum is a finite maximum and the embedding identity is exact.

use crate::curve::ConcaveCurve;
use crate::error::GridError;

/// Samples of a function on the uniform grid `x_i = i h`, `i = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    h: f64,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(h: f64, values: Vec<f64>) -> Result<Self, GridError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(GridError::NonpositiveStep(h));
        }
        if values.len() < 2 {
            return Err(GridError::TooFewSamples);
        }
        for (index, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(GridError::NonFiniteSample { index });
            }
        }
        Ok(GridFunction { h, values })
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The modulus of continuity on the grid:
/// `Omega(t, f) = max { |f(x) - f(y)| : |x - y| <= t }`.
pub fn modulus_of_continuity(f: &GridFunction, t: f64) -> Result<f64, GridError> {
    if t < 0.0 || t.is_nan() {
        return Err(GridError::NegativeArgument(t));
    }
    let n = f.len();
    let max_gap = (t / f.h).floor() as usize;
    let mut best = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n.min(i + max_gap + 1) {
            best = best.max((f.values[i] - f.values[j]).abs());
        }
    }
    Ok(best)
}

/// `K(t, f; {C^0, C^1})` on the grid: the exact maximum of
/// `|f(x) - f(y)| / (2 + |x - y| / t)` over all grid pairs.
pub fn k_c0c1(f: &GridFunction, t: f64) -> Result<f64, GridError> {
    if !(t > 0.0) {
        return Err(GridError::NonpositiveT(t));
    }
    let n = f.len();
    let mut best = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (j - i) as f64 * f.h;
            best = best.max((f.values[i] - f.values[j]).abs() / (2.0 + d / t));
        }
    }
    Ok(best)
}

/// Both sides of the concave-majorant comparison at `t`: the sup-quotient
/// value, half the least concave majorant of the sampled modulus, and their
/// ratio. The two are equivalent, not equal; a zero function reports ratio 1.
#[derive(Debug, Clone, Copy)]
pub struct Eq24Report {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

pub fn k_eq24_check(f: &GridFunction, t: f64) -> Result<Eq24Report, GridError> {
    if !(t > 0.0) {
        return Err(GridError::NonpositiveT(t));
    }
    let lhs = k_c0c1(f, t)?;
    let rhs = 0.5 * omega_majorant(f).eval_unchecked(t);
    let ratio = if rhs == 0.0 && lhs == 0.0 {
        1.0
    } else {
        lhs / rhs
    };
    Ok(Eq24Report { lhs, rhs, ratio })
}

/// The least concave majorant of the modulus sampled at every achievable
/// grid distance.
pub fn omega_majorant(f: &GridFunction) -> ConcaveCurve {
    let n = f.len();
    let pts: Vec<(f64, f64)> = (1..n)
        .map(|k| {
            let d = k as f64 * f.h;
            (d, modulus_of_continuity(f, d).unwrap())
        })
        .collect();
    ConcaveCurve::least_concave_majorant(&pts).expect("modulus samples are finite")
}

/// The difference embedding `b(x, y) = f(x) - f(y)` as a dense antisymmetric
/// array (row-major over `(i, j)`).
#[derive(Debug, Clone)]
pub struct DifferenceArray {
    n: usize,
    h: f64,
    entries: Vec<f64>,
}

impl DifferenceArray {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `K_inf(t, b)` on the weighted sup-norm pair with weights `1/2` and
    /// `1/|x - y|`: coordinatewise the scalar harmonic coefficient, so the
    /// value is `max |b(x, y)| / (2 + |x - y| / t)`, the same finite family
    /// of quotients as [`k_c0c1`].
    pub fn k_linf_pair(&self, t: f64) -> Result<f64, GridError> {
        if !(t > 0.0) {
            return Err(GridError::NonpositiveT(t));
        }
        let mut best = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let d = (i as f64 - j as f64).abs() * self.h;
                best = best.max(self.value(i, j).abs() / (2.0 + d / t));
            }
        }
        Ok(best)
    }
}

pub fn difference_embed(f: &GridFunction) -> DifferenceArray {
    let n = f.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = f.values[i] - f.values[j];
        }
    }
    DifferenceArray { n, h: f.h, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rel_err;

    fn bump() -> GridFunction {
        GridFunction::new(1.0, vec![0.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn modulus_hand_values() {
        let f = bump();
        assert_eq!(modulus_of_continuity(&f, 1.0).unwrap(), 1.0);
        assert_eq!(modulus_of_continuity(&f, 0.0).unwrap(), 0.0);
        let c = GridFunction::new(0.5, vec![2.0; 5]).unwrap();
        assert_eq!(modulus_of_continuity(&c, 10.0).unwrap(), 0.0);
        assert!(modulus_of_continuity(&f, -1.0).is_err());
    }

    #[test]
    fn modulus_is_monotone_and_subadditive_on_grid() {
        let f = GridFunction::new(0.5, vec![0.3, -0.9, 1.4, 0.2, 0.8, -0.1]).unwrap();
        let omega = |t: f64| modulus_of_continuity(&f, t).unwrap();
        for k in 1..5 {
            assert!(omega(k as f64 * 0.5) <= omega((k + 1) as f64 * 0.5) + 1e-15);
        }
        for s in 1..4usize {
            for t in 1..(5 - s) {
                let lhs = omega((s + t) as f64 * 0.5);
                let rhs = omega(s as f64 * 0.5) + omega(t as f64 * 0.5);
                assert!(lhs <= rhs + 1e-12);
            }
        }
    }

    #[test]
    fn k_c0c1_hand_values() {
        let f = bump();
        assert!(rel_err(k_c0c1(&f, 1.0).unwrap(), 1.0 / 3.0) < 1e-14);
        assert!(rel_err(k_c0c1(&f, 1e12).unwrap(), 0.5) < 1e-9);
        let c = GridFunction::new(1.0, vec![5.0; 4]).unwrap();
        assert_eq!(k_c0c1(&c, 2.0).unwrap(), 0.0);
        assert!(k_c0c1(&f, 0.0).is_err());
    }

    #[test]
    fn k_c0c1_nondecreasing_and_concave_up_to_grid_resolution() {
        let f = GridFunction::new(0.25, vec![0.0, 0.7, -0.3, 0.9, 0.4, 0.4, -0.6]).unwrap();
        let mut prev = 0.0;
        let ts: Vec<f64> = (0..40)
            .map(|i| 2.0f64.powf(-5.0 + 0.25 * i as f64))
            .collect();
        let vals: Vec<f64> = ts.iter().map(|&t| k_c0c1(&f, t).unwrap()).collect();
        for &v in &vals {
            assert!(v + 1e-12 >= prev);
            prev = v;
        }
        // The sup-quotient is a max of concave quotients, so it is concave
        // only up to grid effects: it must hug its own concave majorant.
        let pts: Vec<(f64, f64)> = ts.iter().copied().zip(vals.iter().copied()).collect();
        let hull = ConcaveCurve::least_concave_majorant(&pts).unwrap();
        for (t, v) in pts {
            let h = hull.eval_unchecked(t);
            assert!(v <= h * (1.0 + 1e-12));
            assert!(
                v >= h * (1.0 - 0.05),
                "gap beyond grid resolution at t={t}: {v} vs {h}"
            );
        }
    }

    #[test]
    fn eq24_report_hand_values() {
        let f = bump();
        let r = k_eq24_check(&f, 1.0).unwrap();
        assert!(rel_err(r.lhs, 1.0 / 3.0) < 1e-14);
        assert!(rel_err(r.rhs, 0.5) < 1e-14);
        assert!(rel_err(r.ratio, 2.0 / 3.0) < 1e-13);

        let c = GridFunction::new(1.0, vec![1.0; 3]).unwrap();
        let r = k_eq24_check(&c, 2.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.ratio), (0.0, 0.0, 1.0));

        let lin = GridFunction::new(1.0, vec![0.0, 1.0, 2.0]).unwrap();
        for t in [0.25, 1.0, 4.0] {
            let r = k_eq24_check(&lin, t).unwrap();
            assert!(r.ratio >= 0.25 && r.ratio <= 4.0);
        }
    }

    #[test]
    fn difference_embedding_is_antisymmetric_and_exact() {
        let f = bump();
        let b = difference_embed(&f);
        assert_eq!(b.value(0, 1), -1.0);
        assert_eq!(b.value(1, 2), 1.0);
        assert_eq!(b.value(0, 2), 0.0);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b.value(i, j), -b.value(j, i));
            }
        }
        for t in [0.5, 1.0, 2.0] {
            let lhs = b.k_linf_pair(t).unwrap();
            let rhs = k_c0c1(&f, t).unwrap();
            assert!(rel_err(lhs, rhs) < 1e-14);
        }

        let c = GridFunction::new(1.0, vec![3.0; 4]).unwrap();
        let b = difference_embed(&c);
        assert!(b.entries.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn embedded_k_matches_the_flattened_sup_couple() {
        // Build the actual weighted sup-norm couple on the off-diagonal
        // pairs and evaluate its equal-exponent K at p = inf: it must equal
        // the pairwise formula coordinate for coordinate.
        use crate::couple::{Couple, Exponent};
        use crate::kfun::k_equal_exponent;
        let f = GridFunction::new(0.5, vec![0.2, -0.4, 0.9, 0.1]).unwrap();
        let b = difference_embed(&f);
        let n = f.len();
        let mut w0 = Vec::new();
        let mut w1 = Vec::new();
        let mut flat = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = (i as f64 - j as f64).abs() * f.step();
                w0.push(0.5);
                w1.push(1.0 / d);
                flat.push(b.value(i, j));
            }
        }
        let couple =
            Couple::new(flat.len(), w0, w1, Exponent::Infinity, Exponent::Infinity).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let via_couple = k_equal_exponent(&couple, &flat, t).unwrap();
            let direct = b.k_linf_pair(t).unwrap();
            assert!(rel_err(via_couple, direct) < 1e-13);
            assert!(rel_err(via_couple, k_c0c1(&f, t).unwrap()) < 1e-13);
        }
    }
}
