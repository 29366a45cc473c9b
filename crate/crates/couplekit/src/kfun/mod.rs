//! K- and J-functionals: the general solver, closed forms, exact K-curves,
//! and the cone of realizable curves.

pub mod closed_form;
mod frontier;
pub mod registry;

use crate::couple::{Couple, Exponent, Side};
use crate::curve::ConcaveCurve;
use crate::error::{CurveError, KError, RealizeError};

pub use closed_form::{exact_k_curve, k_equal_exponent, k_l1_linf, k_l1_linf_curve};
pub(crate) use frontier::lp_combine;
pub use registry::{auto_select, strategies, strategy, KStrategy};

/// A decomposition `a = a0 + a1` witnessing a K-value.
#[derive(Debug, Clone)]
pub struct Split {
    pub a0: Vec<f64>,
    pub a1: Vec<f64>,
}

impl Split {
    /// The objective this split achieves for the given couple and
    /// parameters.
    pub fn objective(&self, couple: &Couple, t: f64, p: Exponent) -> f64 {
        lp_combine(
            couple.side_norm(Side::Zero, &self.a0),
            t * couple.side_norm(Side::One, &self.a1),
            p,
        )
    }
}

#[derive(Debug, Clone)]
pub struct KResult {
    pub value: f64,
    pub split: Split,
}

/// `K_p(t, a)`: the infimum over splits of the `l_p`-combination
/// `(||a0||_0^p + t^p ||a1||_1^p)^(1/p)`, computed by the general convex
/// solver with a witnessing split.
pub fn k_functional(
    couple: &Couple,
    a: &[f64],
    t: f64,
    p: Exponent,
    tol: f64,
) -> Result<KResult, KError> {
    if !(tol > 0.0) {
        return Err(KError::NonpositiveTolerance(tol));
    }
    registry::strategy("general")
        .unwrap()
        .evaluate(couple, a, t, p, tol)
}

/// `K(t, a) = K_1(t, a)`, by closed form where one applies and by the
/// general solver otherwise.
pub fn k(couple: &Couple, a: &[f64], t: f64) -> Result<f64, KError> {
    couple.check_element(a)?;
    if !(t > 0.0) {
        return Err(KError::NonpositiveT(t));
    }
    if let Some(v) = closed_form::k_value(couple, a, t) {
        return Ok(v);
    }
    Ok(k_functional(couple, a, t, Exponent::Finite(1.0), 1e-9)?.value)
}

/// `J_p(t, a) = (||a||_0^p + t^p ||a||_1^p)^(1/p)`; the max of the two for
/// `p = inf` (the plain J-functional).
pub fn j_functional(couple: &Couple, a: &[f64], t: f64, p: Exponent) -> Result<f64, KError> {
    couple.check_element(a)?;
    if !(t > 0.0) {
        return Err(KError::NonpositiveT(t));
    }
    Ok(lp_combine(
        couple.side_norm(Side::Zero, a),
        t * couple.side_norm(Side::One, a),
        p,
    ))
}

/// `J(t, a) = max(||a||_0, t ||a||_1)`.
pub fn j(couple: &Couple, a: &[f64], t: f64) -> Result<f64, KError> {
    j_functional(couple, a, t, Exponent::Infinity)
}

/// The decreasing absolute rearrangement: `|a|` sorted nonincreasing.
/// The sort is stable on the absolute values, so ties keep their original
/// order and the result is a deterministic function of `a`.
pub fn decreasing_rearrangement(a: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = a.iter().map(|x| x.abs()).collect();
    out.sort_by(|x, y| y.partial_cmp(x).unwrap());
    out
}

/// The exact K-curve of `a` when the couple admits one in closed form
/// (exponent pairs `(1, inf)`, `(1, 1)`, `(inf, 1)`).
pub fn k_curve(couple: &Couple, a: &[f64]) -> Option<ConcaveCurve> {
    for s in registry::strategies() {
        if let Some(c) = s.exact_curve(couple, a) {
            return Some(c);
        }
    }
    None
}

/// A sampled stand-in for couples without an exact curve: the least concave
/// majorant of solver values on a log-spaced grid. Exact curves are returned
/// unchanged.
pub fn k_curve_sampled(couple: &Couple, a: &[f64], points: usize) -> Result<ConcaveCurve, KError> {
    if let Some(c) = k_curve(couple, a) {
        return Ok(c);
    }
    let mut pts = Vec::with_capacity(points);
    for i in 0..points {
        let t = 2.0f64.powf(-12.0 + 24.0 * (i as f64) / ((points - 1) as f64));
        pts.push((t, k(couple, a, t)?));
    }
    ConcaveCurve::least_concave_majorant(&pts).map_err(|_| KError::NonConvergence {
        lower: 0.0,
        upper: f64::NAN,
    })
}

/// Re-export of the least concave majorant of a finite point set.
pub fn least_concave_majorant(points: &[(f64, f64)]) -> Result<ConcaveCurve, CurveError> {
    ConcaveCurve::least_concave_majorant(points)
}

/// Recovers the element of the unweighted `{l_1, l_inf}` couple whose
/// K-curve is `phi`: the slope vector over the integer subintervals.
/// `phi` must vanish at `0+`, kink only at integers and be eventually
/// constant; which clause failed is reported.
pub fn realize_k(phi: &ConcaveCurve) -> Result<Vec<f64>, RealizeError> {
    let scale = phi.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let origin = phi.value_at_zero();
    if origin.abs() > 1e-9 * scale {
        return Err(RealizeError::NonzeroOrigin(origin));
    }
    if phi.terminal_slope().abs() > 1e-9 * scale {
        return Err(RealizeError::NotEventuallyConstant(phi.terminal_slope()));
    }
    let mut last = 0usize;
    for &t in phi.breakpoints() {
        let r = t.round();
        if (t - r).abs() > 1e-9 || r < 1.0 {
            return Err(RealizeError::NonIntegerBreakpoint(t));
        }
        last = r as usize;
    }
    let slopes: Vec<f64> = (1..=last)
        .map(|i| phi.eval_unchecked(i as f64) - phi.eval_unchecked(i as f64 - 1.0).max(0.0))
        .collect();
    Ok(slopes)
}

/// The kind of base grid behind the realizability cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    /// `M = (0, inf)`: every positive concave curve vanishing at `0+`.
    Halfline,
    /// `M = (0, 1)`: vanishing at `0+` and constant from `t = 1` on.
    UnitInterval,
    /// `M = {0, 1, 2, ...}`: vanishing at `0+`, kinks only at integers.
    Discrete,
}

/// Membership of `phi` in the cone of curves realizable as `K(., a)` over
/// the given base grid.
pub fn cone_membership(phi: &ConcaveCurve, kind: ConeKind) -> bool {
    let scale = phi.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let vanishes = phi.value_at_zero().abs() <= 1e-12 * scale;
    match kind {
        ConeKind::Halfline => vanishes,
        ConeKind::UnitInterval => {
            let flat_after_one = phi.terminal_slope() == 0.0
                && phi.breakpoints().iter().zip(phi.values()).all(|(&t, &v)| {
                    t <= 1.0 + 1e-12 || (v - phi.eval_unchecked(1.0)).abs() <= 1e-12 * scale
                });
            vanishes && flat_after_one
        }
        ConeKind::Discrete => {
            vanishes
                && phi.terminal_slope() >= 0.0
                && phi
                    .breakpoints()
                    .iter()
                    .all(|&t| (t - t.round()).abs() <= 1e-12 * t.max(1.0))
        }
    }
}
