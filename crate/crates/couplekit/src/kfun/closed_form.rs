//! Closed forms for K: the rearrangement formula on the unweighted
//! `{l_1, l_inf}` couple, the equal-exponent coefficient formula, and exact
//! piecewise-linear K-curves for the exponent pairs that admit them.

use crate::couple::{weighted_norm, Couple, Exponent, Side};
use crate::curve::ConcaveCurve;
use crate::error::{CurveError, KError};

use super::{decreasing_rearrangement, KResult, Split};

/// `K(t, a; {l_1, l_inf})` by the rearrangement formula: the running
/// integral of the decreasing rearrangement up to `t`.
pub fn k_l1_linf(a: &[f64], t: f64) -> Result<f64, KError> {
    if !(t > 0.0) {
        return Err(KError::NonpositiveT(t));
    }
    let sorted = decreasing_rearrangement(a);
    let n = sorted.len();
    if t >= n as f64 {
        return Ok(sorted.iter().sum());
    }
    let whole = t.floor() as usize;
    let head: f64 = sorted[..whole].iter().sum();
    Ok(head + (t - whole as f64) * sorted[whole])
}

/// The exact K-curve on the unweighted couple: integer breakpoints `1..=n`
/// with the rearranged entries as slopes.
pub fn k_l1_linf_curve(a: &[f64]) -> ConcaveCurve {
    let sorted = decreasing_rearrangement(a);
    ConcaveCurve::from_integer_slopes(&sorted).expect("rearranged slopes are admissible")
}

pub(crate) fn k_l1_linf_split(a: &[f64], t: f64) -> Split {
    let sorted = decreasing_rearrangement(a);
    let n = sorted.len();
    let level = if t >= n as f64 {
        0.0
    } else {
        sorted[t.floor() as usize]
    };
    let a1: Vec<f64> = a.iter().map(|&x| x.signum() * x.abs().min(level)).collect();
    let a0: Vec<f64> = a.iter().zip(&a1).map(|(x, y)| x - y).collect();
    Split { a0, a1 }
}

/// The equal-exponent coefficient `(w0^{-p'} + (t w1)^{-p'})^{-1/p'}`,
/// evaluated through its stable `min`-scaled form; degenerates to
/// `min(w0, t w1)` at `p = 1` and to the harmonic combination at `p = inf`.
pub(crate) fn equal_exponent_coefficient(w0: f64, tw1: f64, p: Exponent) -> f64 {
    match p {
        Exponent::Finite(q) if q == 1.0 => w0.min(tw1),
        Exponent::Infinity => 1.0 / (1.0 / w0 + 1.0 / tw1),
        Exponent::Finite(q) => {
            let pp = q / (q - 1.0);
            let (lo, hi) = if w0 <= tw1 { (w0, tw1) } else { (tw1, w0) };
            lo * (1.0 + (lo / hi).powf(pp)).powf(-1.0 / pp)
        }
    }
}

/// `K_p(t, a)` when both sides carry the same exponent `p`: coordinatewise
/// coefficients, no optimization.
pub fn k_equal_exponent(couple: &Couple, a: &[f64], t: f64) -> Result<f64, KError> {
    couple.check_element(a)?;
    if !(t > 0.0) {
        return Err(KError::NonpositiveT(t));
    }
    let p0 = couple.exponent(Side::Zero);
    let p1 = couple.exponent(Side::One);
    if p0 != p1 {
        return Err(KError::ExponentMismatch { p0, p1 });
    }
    let coef: Vec<f64> = couple
        .weights(Side::Zero)
        .iter()
        .zip(couple.weights(Side::One))
        .map(|(&w0, &w1)| equal_exponent_coefficient(w0, t * w1, p0))
        .collect();
    Ok(weighted_norm(&coef, a, p0))
}

pub(crate) fn k_equal_exponent_split(couple: &Couple, a: &[f64], t: f64) -> Split {
    let p = couple.exponent(Side::Zero);
    let n = couple.len();
    let mut a0 = vec![0.0; n];
    let mut a1 = vec![0.0; n];
    for i in 0..n {
        let w0 = couple.weights(Side::Zero)[i];
        let tw1 = t * couple.weights(Side::One)[i];
        let frac0 = match p {
            Exponent::Finite(q) if q == 1.0 => {
                if w0 <= tw1 {
                    1.0
                } else {
                    0.0
                }
            }
            Exponent::Infinity => tw1 / (w0 + tw1),
            Exponent::Finite(q) => {
                let rho = (tw1 / w0).powf(q / (q - 1.0));
                if rho.is_infinite() {
                    1.0
                } else {
                    rho / (1.0 + rho)
                }
            }
        };
        a0[i] = a[i] * frac0;
        a1[i] = a[i] - a0[i];
    }
    Split { a0, a1 }
}

pub(crate) fn k_equal_exponent_result(
    couple: &Couple,
    a: &[f64],
    t: f64,
) -> Result<KResult, KError> {
    let value = k_equal_exponent(couple, a, t)?;
    Ok(KResult {
        value,
        split: k_equal_exponent_split(couple, a, t),
    })
}

/// `K(t, a)` in closed form for the exponent pairs with exact curves,
/// without building the curve. `None` when no closed form applies.
pub fn k_value(couple: &Couple, a: &[f64], t: f64) -> Option<f64> {
    if couple.check_element(a).is_err() || !(t > 0.0) {
        return None;
    }
    let p0 = couple.exponent(Side::Zero);
    let p1 = couple.exponent(Side::One);
    let w0 = couple.weights(Side::Zero);
    let w1 = couple.weights(Side::One);
    match (p0, p1) {
        (Exponent::Finite(q0), Exponent::Infinity) if q0 == 1.0 => {
            // min over the clipping levels of residual cost + t * level.
            let mut best = a.iter().zip(w0).map(|(&x, &u)| u * x.abs()).sum::<f64>();
            for (&x, &w) in a.iter().zip(w1) {
                let s = w * x.abs();
                let cost: f64 = a
                    .iter()
                    .zip(w0.iter().zip(w1))
                    .map(|(&y, (&u, &v))| u * (y.abs() - s / v).max(0.0))
                    .sum();
                best = best.min(cost + t * s);
            }
            Some(best)
        }
        (Exponent::Finite(q0), Exponent::Finite(q1)) if q0 == 1.0 && q1 == 1.0 => Some(
            a.iter()
                .zip(w0.iter().zip(w1))
                .map(|(&x, (&u, &v))| u.min(t * v) * x.abs())
                .sum(),
        ),
        (Exponent::Infinity, Exponent::Finite(q1)) if q1 == 1.0 => {
            let swapped = Couple::new(couple.len(), w1.to_vec(), w0.to_vec(), p1, p0).ok()?;
            k_value(&swapped, a, 1.0 / t).map(|k| t * k)
        }
        _ => None,
    }
}

/// Exact piecewise-linear K-curve, available for the exponent pairs
/// `(1, inf)`, `(1, 1)` and `(inf, 1)` with arbitrary weights. `None`
/// otherwise (the K-curve then fails to be piecewise linear in general).
pub fn exact_k_curve(couple: &Couple, a: &[f64]) -> Option<ConcaveCurve> {
    couple.check_element(a).ok()?;
    let p0 = couple.exponent(Side::Zero);
    let p1 = couple.exponent(Side::One);
    match (p0, p1) {
        (Exponent::Finite(q0), Exponent::Infinity) if q0 == 1.0 => Some(curve_l1w_linfw(
            couple.weights(Side::Zero),
            couple.weights(Side::One),
            a,
        )),
        (Exponent::Finite(q0), Exponent::Finite(q1)) if q0 == 1.0 && q1 == 1.0 => Some(
            curve_l1w_l1w(couple.weights(Side::Zero), couple.weights(Side::One), a),
        ),
        (Exponent::Infinity, Exponent::Finite(q1)) if q1 == 1.0 => {
            let swapped = Couple::new(
                couple.len(),
                couple.weights(Side::One).to_vec(),
                couple.weights(Side::Zero).to_vec(),
                p1,
                p0,
            )
            .ok()?;
            exact_k_curve(&swapped, a).map(|c| swap_transform(&c))
        }
        _ => None,
    }
}

/// `K(t, a; {l_1(w0), l_inf(w1)})`: the lower envelope of the lines
/// `c(s) + t s` over the clipping levels `s` where the residual cost
/// `c(s) = sum w0 (|a| - s/w1)_+` has kinks.
fn curve_l1w_linfw(w0: &[f64], w1: &[f64], a: &[f64]) -> ConcaveCurve {
    let mut levels: Vec<f64> = a.iter().zip(w1).map(|(&x, &w)| w * x.abs()).collect();
    levels.push(0.0);
    levels.sort_by(|x, y| x.partial_cmp(y).unwrap());
    levels.dedup();
    let cost = |s: f64| -> f64 {
        a.iter()
            .zip(w0)
            .zip(w1)
            .map(|((&x, &u), &w)| u * (x.abs() - s / w).max(0.0))
            .sum()
    };
    let lines: Vec<(f64, f64)> = levels.iter().map(|&s| (s, cost(s))).collect();
    lower_envelope_curve(&lines).expect("envelope of level lines is a valid curve")
}

/// `K(t, a; {l_1(w0), l_1(w1)}) = sum min(w0_i, t w1_i) |a_i|`: piecewise
/// linear with kinks at the weight ratios.
fn curve_l1w_l1w(w0: &[f64], w1: &[f64], a: &[f64]) -> ConcaveCurve {
    let mut kinks: Vec<f64> = a
        .iter()
        .zip(w0.iter().zip(w1))
        .filter(|(&x, _)| x != 0.0)
        .map(|(_, (&u, &w))| u / w)
        .collect();
    kinks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    kinks.dedup();
    if kinks.is_empty() {
        return ConcaveCurve::from_breakpoints(vec![1.0], vec![0.0], 0.0, 0.0).unwrap();
    }
    let eval = |t: f64| -> f64 {
        a.iter()
            .zip(w0.iter().zip(w1))
            .map(|(&x, (&u, &w))| u.min(t * w) * x.abs())
            .sum()
    };
    let values: Vec<f64> = kinks.iter().map(|&t| eval(t)).collect();
    let initial: f64 = a.iter().zip(w1).map(|(&x, &w)| w * x.abs()).sum();
    ConcaveCurve::from_breakpoints(kinks, values, initial, 0.0).expect("min-sum curve is concave")
}

/// Lower envelope of lines `(slope, intercept)` as a concave curve. Slopes
/// and intercepts must be nonnegative and the set must contain a zero-slope
/// line (the `t -> inf` limit) and a zero-intercept line (the `t -> 0` one).
fn lower_envelope_curve(lines: &[(f64, f64)]) -> Result<ConcaveCurve, CurveError> {
    // Sort by slope descending: steep lines win near zero.
    let mut by_slope: Vec<(f64, f64)> = lines.to_vec();
    by_slope.sort_by(|x, y| {
        y.0.partial_cmp(&x.0)
            .unwrap()
            .then(x.1.partial_cmp(&y.1).unwrap())
    });
    by_slope.dedup_by(|a, b| a.0 == b.0);
    // Active pieces as (slope, intercept, start_t).
    let mut stack: Vec<(f64, f64, f64)> = Vec::new();
    for &(s, c) in &by_slope {
        let mut start = 0.0;
        while let Some(&(s_top, c_top, t_top)) = stack.last() {
            if c >= c_top && s >= s_top {
                start = f64::INFINITY; // dominated
                break;
            }
            // Intersection with the current top piece.
            let x = (c - c_top) / (s_top - s);
            if x <= t_top {
                stack.pop();
            } else {
                start = x;
                break;
            }
        }
        if start.is_finite() {
            stack.push((s, c, start));
        }
    }
    if stack.len() == 1 {
        let (s, c, _) = stack[0];
        return ConcaveCurve::from_breakpoints(vec![1.0], vec![c + s], s, s);
    }
    let mut bps = Vec::with_capacity(stack.len() - 1);
    let mut vals = Vec::with_capacity(stack.len() - 1);
    for w in stack.windows(2) {
        let (s, c, _) = w[0];
        let t = w[1].2;
        bps.push(t);
        vals.push(c + s * t);
    }
    let initial = stack[0].0;
    let terminal = stack.last().unwrap().0;
    ConcaveCurve::from_breakpoints(bps, vals, initial, terminal)
}

/// Transforms the K-curve under swapping the two sides:
/// `K(t, a; {X, Y}) = t K(1/t, a; {Y, X})`, which maps piecewise-linear
/// curves to piecewise-linear curves with inverted breakpoints.
fn swap_transform(psi: &ConcaveCurve) -> ConcaveCurve {
    let u = psi.breakpoints();
    let v = psi.values();
    let k = u.len();
    let mut bps = Vec::with_capacity(k);
    let mut vals = Vec::with_capacity(k);
    for i in (0..k).rev() {
        bps.push(1.0 / u[i]);
        vals.push(v[i] / u[i]);
    }
    let initial = v[k - 1] - psi.terminal_slope() * u[k - 1];
    let terminal = psi.value_at_zero();
    ConcaveCurve::from_breakpoints(bps, vals, initial, terminal)
        .expect("swap of a valid K-curve is valid")
}
