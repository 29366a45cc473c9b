//! Real-method interpolation norms built from exact K-curves: the
//! `(theta, q)` function norm, the interpolation property in the exact
//! category, the subcouple norm-agreement consequence, and the Lorentz
//! couple equivalence.

mod lorentz;

pub use lorentz::{lorentz_k_equiv, lorentz_norm, LorentzReport};

use crate::couple::{Couple, Exponent};
use crate::curve::ConcaveCurve;
use crate::error::InterpError;
use crate::kfun;
use crate::structure::{operator_norm_l, LinearMap, SubcoupleSpec};

/// Parameters of the `(theta, q; K)` method.
#[derive(Debug, Clone, Copy)]
pub struct KMethodParams {
    theta: f64,
    q: Exponent,
}

impl KMethodParams {
    pub fn new(theta: f64, q: Exponent) -> Result<Self, InterpError> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(InterpError::ThetaOutOfRange(theta));
        }
        Ok(KMethodParams { theta, q })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn q(&self) -> Exponent {
        self.q
    }
}

/// The `(theta, q)` norm `(int_0^inf (t^-theta K(t, a))^q dt/t)^(1/q)`
/// evaluated on an exact piecewise-linear K-curve: elementary power
/// integrals on every linear piece for integer `q`, the exact supremum for
/// `q = inf`, adaptive quadrature on the bounded middle pieces otherwise.
/// Finite couples keep `K ~ min(c0, c1 t)` at both ends, so the integral
/// always converges.
pub fn k_space_norm_from_curve(curve: &ConcaveCurve, params: KMethodParams) -> f64 {
    let theta = params.theta;
    let sup = sup_norm(curve, theta);
    if sup == 0.0 {
        return 0.0;
    }
    let q = match params.q {
        Exponent::Infinity => return sup,
        Exponent::Finite(q) => q,
    };
    // Normalize by the sup so powers stay in range.
    let mut total = 0.0;
    for (alpha, beta, ta, tb) in pieces(curve) {
        total += piece_integral(alpha / sup, beta / sup, ta, tb, theta, q);
    }
    sup * total.powf(1.0 / q)
}

/// Piece list as `(intercept, slope, t_lo, t_hi)`, the last piece with
/// `t_hi = inf`.
fn pieces(curve: &ConcaveCurve) -> Vec<(f64, f64, f64, f64)> {
    let bps = curve.breakpoints();
    let vals = curve.values();
    let mut out = Vec::with_capacity(bps.len() + 1);
    let s0 = curve.initial_slope();
    out.push((curve.value_at_zero(), s0, 0.0, bps[0]));
    for i in 1..bps.len() {
        let slope = (vals[i] - vals[i - 1]) / (bps[i] - bps[i - 1]);
        let alpha = vals[i] - slope * bps[i];
        out.push((alpha, slope, bps[i - 1], bps[i]));
    }
    let k = bps.len() - 1;
    let st = curve.terminal_slope();
    out.push((vals[k] - st * bps[k], st, bps[k], f64::INFINITY));
    out
}

fn sup_norm(curve: &ConcaveCurve, theta: f64) -> f64 {
    let mut best = 0.0f64;
    for (alpha, beta, ta, tb) in pieces(curve) {
        let h = |t: f64| (alpha + beta * t) * t.powf(-theta);
        if ta > 0.0 {
            best = best.max(h(ta));
        }
        if tb.is_finite() {
            best = best.max(h(tb));
        }
        if alpha > 0.0 && beta > 0.0 {
            let t_star = theta * alpha / ((1.0 - theta) * beta);
            if t_star > ta && t_star < tb {
                best = best.max(h(t_star));
            }
        }
    }
    best
}

/// `int_ta^tb (alpha + beta t)^q t^(-theta q - 1) dt`, exact for integer
/// `q` (binomial expansion into power integrals) and for the pure-power
/// boundary pieces, adaptive Simpson otherwise.
fn piece_integral(alpha: f64, beta: f64, ta: f64, tb: f64, theta: f64, q: f64) -> f64 {
    if alpha == 0.0 && beta == 0.0 {
        return 0.0;
    }
    if alpha == 0.0 {
        // beta^q t^(q - theta q - 1): exponent positive, fine at t = 0.
        return beta.powf(q) * power_integral(q * (1.0 - theta), ta, tb);
    }
    if beta == 0.0 {
        return alpha.powf(q) * power_integral(-q * theta, ta, tb);
    }
    let qi = q.round();
    if (q - qi).abs() < 1e-12 && qi <= 64.0 {
        let m = qi as i64;
        let mut sum = 0.0;
        let mut binom = 1.0f64;
        for k in 0..=m {
            let coef = binom * alpha.powi((m - k) as i32) * beta.powi(k as i32);
            sum += coef * power_integral(k as f64 - theta * q, ta, tb);
            binom = binom * (m - k) as f64 / (k + 1) as f64;
        }
        return sum;
    }
    adaptive_simpson(
        &|t: f64| (alpha + beta * t).powf(q) * t.powf(-theta * q - 1.0),
        ta.max(1e-300),
        tb,
        1e-13,
        24,
    )
}

/// `int ta^tb t^(e - 1) dt` with the logarithmic branch at `e = 0`;
/// `tb = inf` allowed when `e < 0`, `ta = 0` allowed when `e > 0`.
fn power_integral(e: f64, ta: f64, tb: f64) -> f64 {
    if e.abs() < 1e-12 {
        return (tb / ta).ln();
    }
    let upper = if tb.is_finite() { tb.powf(e) } else { 0.0 };
    let lower = if ta > 0.0 { ta.powf(e) } else { 0.0 };
    (upper - lower) / e
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let simpson = |x0: f64, x1: f64| {
        let xm = 0.5 * (x0 + x1);
        (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(xm) + f(x1))
    };
    let whole = simpson(a, b);
    let left = simpson(a, m);
    let right = simpson(m, b);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol * whole.abs().max(1e-300) {
        left + right + (left + right - whole) / 15.0
    } else {
        adaptive_simpson(f, a, m, tol / 2.0, depth - 1)
            + adaptive_simpson(f, m, b, tol / 2.0, depth - 1)
    }
}

/// The `(theta, q)` norm of an element: exact curve when the couple admits
/// one, otherwise a dense sampled majorant curve.
pub fn k_space_norm(couple: &Couple, a: &[f64], params: KMethodParams) -> Result<f64, InterpError> {
    couple.check_element(a)?;
    if a.iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    let curve = kfun::k_curve_sampled(couple, a, 257)?;
    Ok(k_space_norm_from_curve(&curve, params))
}

/// The interpolation property in the exact category: for a contraction
/// `T`, the `(theta, q)` norms cannot grow. Returns the largest observed
/// ratio over the samples; a ratio beyond `1 + 1e-9` is an error.
pub fn interpolation_property_check(
    t: &LinearMap,
    params: KMethodParams,
    samples: &[Vec<f64>],
) -> Result<f64, InterpError> {
    let bound = operator_norm_l(t);
    if bound.upper > 1.0 + 1e-9 {
        return Err(InterpError::NotAContraction(bound.upper));
    }
    let mut worst = 0.0f64;
    for a in samples {
        let source = k_space_norm(t.source(), a, params)?;
        if source == 0.0 {
            continue;
        }
        let target = k_space_norm(t.target(), &t.apply(a), params)?;
        worst = worst.max(target / source);
    }
    if worst > 1.0 + 1e-9 {
        return Err(InterpError::InterpolationBoundViolated { ratio: worst });
    }
    Ok(worst)
}

/// Outcome of the subcouple norm-agreement check.
#[derive(Debug, Clone)]
pub enum Prop41Outcome {
    /// The sub and ambient `(theta, q)` norms agree on every sample.
    Equal { max_rel_gap: f64 },
    /// Only the one-sided inclusion holds: the subcouple norm exceeds the
    /// ambient one somewhere (reported with the worst sample gap).
    OneSidedInclusion { max_rel_gap: f64, witness: Vec<f64> },
}

/// Compares the `(theta, q)` norm computed with the subcouple's K-curve
/// against the ambient one for elements of the subcouple. Equality is the
/// b-subcouple consequence; otherwise the one-sided inclusion is reported.
pub fn prop41_check(
    spec: &SubcoupleSpec,
    params: KMethodParams,
    samples: &[Vec<f64>],
) -> Result<Prop41Outcome, InterpError> {
    let mut max_gap = 0.0f64;
    let mut witness: Option<Vec<f64>> = None;
    for a in samples {
        let sub_curve = match spec.sub_k_curve(a) {
            Some(c) => c,
            None => sampled_sub_curve(spec, a)?,
        };
        let sub_norm = k_space_norm_from_curve(&sub_curve, params);
        let amb_norm = k_space_norm(spec.ambient(), a, params)?;
        let scale = sub_norm.abs().max(amb_norm.abs()).max(1e-300);
        let gap = (sub_norm - amb_norm) / scale;
        debug_assert!(
            gap >= -1e-6,
            "subcouple norm below ambient: {sub_norm} < {amb_norm}"
        );
        if gap.abs() > max_gap {
            max_gap = gap.abs();
            if gap > 1e-8 {
                witness = Some(a.clone());
            }
        }
    }
    Ok(match witness {
        None => Prop41Outcome::Equal {
            max_rel_gap: max_gap,
        },
        Some(w) => Prop41Outcome::OneSidedInclusion {
            max_rel_gap: max_gap,
            witness: w,
        },
    })
}

fn sampled_sub_curve(spec: &SubcoupleSpec, a: &[f64]) -> Result<ConcaveCurve, InterpError> {
    let mut pts = Vec::with_capacity(129);
    for i in 0..129 {
        let t = 2.0f64.powf(-12.0 + 24.0 * (i as f64) / 128.0);
        pts.push((t, spec.sub_k(a, t)?));
    }
    ConcaveCurve::least_concave_majorant(&pts).map_err(|_| InterpError::ThetaOutOfRange(f64::NAN))
}
