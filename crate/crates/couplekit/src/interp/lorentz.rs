//! The discrete Lorentz couple `{L_p0inf, L_p1inf}` on `x in {1..n}` and
//! its K-equivalence with the weighted sup-norm pair: the couple's K is
//! computed by a threshold-split search with coordinate polish (the
//! quasi-norms are not convex, so this is a certified achievable value),
//! the comparison side is the exact finite sup formula.

use crate::error::InterpError;
use crate::numerics::golden_min;

/// `sup_x x^(1/p) v*(x)` over `x in {1..n}`; `p = inf` gives the plain sup.
pub fn lorentz_norm(v: &[f64], p: f64) -> f64 {
    let mut sorted: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64).powf(1.0 / p) * x)
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct LorentzReport {
    /// `(t, lhs, rhs)` rows: the Lorentz-couple K (split search) and the
    /// sup-formula value.
    pub rows: Vec<(f64, f64, f64)>,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

/// Splits `b = b0 + b1` by a threshold level and measures
/// `N_p0(b0) + t N_p1(b1)`.
fn threshold_value(b: &[f64], s: f64, t: f64, p0: f64, p1: f64) -> f64 {
    let b1: Vec<f64> = b.iter().map(|&x| x.min(s)).collect();
    let b0: Vec<f64> = b.iter().zip(&b1).map(|(x, y)| x - y).collect();
    lorentz_norm(&b0, p0) + t * lorentz_norm(&b1, p1)
}

fn k_lorentz(b: &[f64], t: f64, p0: f64, p1: f64) -> f64 {
    let top = b.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0.0;
    }
    // Candidate thresholds: all sample levels plus a golden refinement
    // between the best bracket.
    let mut levels: Vec<f64> = b.to_vec();
    levels.push(0.0);
    levels.sort_by(|x, y| x.partial_cmp(y).unwrap());
    levels.dedup();
    let mut best = f64::INFINITY;
    let mut best_idx = 0;
    for (i, &s) in levels.iter().enumerate() {
        let v = threshold_value(b, s, t, p0, p1);
        if v < best {
            best = v;
            best_idx = i;
        }
    }
    let lo = if best_idx == 0 {
        0.0
    } else {
        levels[best_idx - 1]
    };
    let hi = if best_idx + 1 < levels.len() {
        levels[best_idx + 1]
    } else {
        top
    };
    let (_, refined) = golden_min(|s| threshold_value(b, s, t, p0, p1), lo, hi, 60);
    best = best.min(refined);

    // Coordinate polish from the best threshold split.
    let (s_star, _) = golden_min(|s| threshold_value(b, s, t, p0, p1), lo, hi, 60);
    let mut x: Vec<f64> = b.iter().map(|&v| v.min(s_star)).collect();
    let value = |x: &[f64]| -> f64 {
        let b0: Vec<f64> = b.iter().zip(x).map(|(v, xi)| v - xi).collect();
        lorentz_norm(&b0, p0) + t * lorentz_norm(x, p1)
    };
    for _ in 0..2 {
        for i in 0..b.len() {
            if b[i] == 0.0 {
                continue;
            }
            let (xi, _) = golden_min(
                |c| {
                    let mut y = x.clone();
                    y[i] = c;
                    value(&y)
                },
                0.0,
                b[i],
                40,
            );
            x[i] = xi;
        }
    }
    best.min(value(&x))
}

/// `sup_x b(x) / (x^(-1/p0) + t^(-1) x^(-1/p1))`: the exact K of the
/// weighted sup-norm pair with weights `x^(1/p0)`, `x^(1/p1)`.
fn sup_formula(b: &[f64], t: f64, p0: f64, p1: f64) -> f64 {
    b.iter()
        .enumerate()
        .map(|(i, &v)| {
            let x = (i + 1) as f64;
            v / (x.powf(-1.0 / p0) + x.powf(-1.0 / p1) / t)
        })
        .fold(0.0, f64::max)
}

/// Compares the Lorentz-couple K with the sup formula over the t-grid and
/// checks the ratios stay inside the `[1/8, 8]` acceptance window.
pub fn lorentz_k_equiv(
    p0: f64,
    p1: f64,
    b: &[f64],
    t_grid: &[f64],
) -> Result<LorentzReport, InterpError> {
    if !(p0 >= 1.0) || !(p1 > p0) {
        return Err(InterpError::BadLorentzExponents);
    }
    let mut prev = f64::INFINITY;
    for &x in b {
        if !(x >= 0.0) || x > prev {
            return Err(InterpError::NotMonotone);
        }
        prev = x;
    }
    let mut rows = Vec::with_capacity(t_grid.len());
    let mut max_ratio = 0.0f64;
    let mut min_ratio = f64::INFINITY;
    let zero = b.iter().all(|&x| x == 0.0);
    for &t in t_grid {
        let lhs = if zero { 0.0 } else { k_lorentz(b, t, p0, p1) };
        let rhs = if zero { 0.0 } else { sup_formula(b, t, p0, p1) };
        if !zero {
            let ratio = lhs / rhs;
            max_ratio = max_ratio.max(ratio);
            min_ratio = min_ratio.min(ratio);
            if !(0.125..=8.0).contains(&ratio) {
                return Err(InterpError::WindowViolated { t, ratio });
            }
        }
        rows.push((t, lhs, rhs));
    }
    if zero {
        max_ratio = 1.0;
        min_ratio = 1.0;
    }
    Ok(LorentzReport {
        rows,
        max_ratio,
        min_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rel_err;

    #[test]
    fn unit_atom_closed_forms() {
        let b = [1.0, 0.0, 0.0];
        let grid = [0.25, 1.0, 4.0];
        let report = lorentz_k_equiv(1.0, f64::INFINITY, &b, &grid).unwrap();
        for &(t, lhs, rhs) in &report.rows {
            assert!(rel_err(rhs, t / (t + 1.0)) < 1e-12);
            assert!(rel_err(lhs, t.min(1.0)) < 1e-9);
        }
        assert!(report.min_ratio >= 0.5 && report.max_ratio <= 2.0);
    }

    #[test]
    fn flat_vector_at_t_one() {
        let b = [1.0, 1.0];
        let report = lorentz_k_equiv(1.0, f64::INFINITY, &b, &[1.0]).unwrap();
        let (_, lhs, rhs) = report.rows[0];
        // x = 2 wins: 1 / (1/2 + 1/1) = 2/3.
        assert!(
            rel_err(rhs, 2.0 / 3.0) < 1e-12,
            "sup formula picks x = 2: {rhs}"
        );
        assert!(lhs >= 0.125 * rhs && lhs <= 8.0 * rhs);
    }

    #[test]
    fn zero_vector_reports_unit_ratio() {
        let report = lorentz_k_equiv(2.0, f64::INFINITY, &[0.0, 0.0], &[0.5, 1.0]).unwrap();
        assert_eq!(report.max_ratio, 1.0);
        for &(_, lhs, rhs) in &report.rows {
            assert_eq!((lhs, rhs), (0.0, 0.0));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            lorentz_k_equiv(2.0, 2.0, &[1.0], &[1.0]),
            Err(InterpError::BadLorentzExponents)
        ));
        assert!(matches!(
            lorentz_k_equiv(1.0, f64::INFINITY, &[0.5, 1.0], &[1.0]),
            Err(InterpError::NotMonotone)
        ));
    }

    #[test]
    fn lorentz_norm_values() {
        // (1, 1/sqrt(2), 1/sqrt(3)) has L_2inf norm 1 at every x.
        let b: Vec<f64> = (1..=3).map(|k| 1.0 / (k as f64).sqrt()).collect();
        assert!(rel_err(lorentz_norm(&b, 2.0), 1.0) < 1e-12);
        assert!(rel_err(lorentz_norm(&b, f64::INFINITY), 1.0) < 1e-12);
    }
}
