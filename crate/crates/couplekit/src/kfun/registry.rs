//! Strategy registry for K-functional evaluation. Each backend lives behind
//! the same trait, is registered under a stable name, and can be picked at
//! runtime (the CLI exposes `--solver`). `auto` prefers a closed form and
//! falls back to the general solver.

use crate::couple::{Couple, Exponent, Side};
use crate::curve::ConcaveCurve;
use crate::error::KError;

use super::closed_form;
use super::frontier::k_via_frontier;
use super::KResult;

pub trait KStrategy: Sync {
    fn name(&self) -> &'static str;

    /// Whether this backend can evaluate `K_p` on the given couple.
    fn supports(&self, couple: &Couple, p: Exponent) -> bool;

    fn evaluate(
        &self,
        couple: &Couple,
        a: &[f64],
        t: f64,
        p: Exponent,
        tol: f64,
    ) -> Result<KResult, KError>;

    /// An exact piecewise-linear curve of `K(., a)` when this backend has
    /// one in closed form.
    fn exact_curve(&self, _couple: &Couple, _a: &[f64]) -> Option<ConcaveCurve> {
        None
    }
}

/// Convex minimization over the split budget; handles every couple.
pub struct GeneralSolver;

impl KStrategy for GeneralSolver {
    fn name(&self) -> &'static str {
        "general"
    }

    fn supports(&self, _couple: &Couple, _p: Exponent) -> bool {
        true
    }

    fn evaluate(
        &self,
        couple: &Couple,
        a: &[f64],
        t: f64,
        p: Exponent,
        tol: f64,
    ) -> Result<KResult, KError> {
        k_via_frontier(couple, a, t, p, tol)
    }

    fn exact_curve(&self, couple: &Couple, a: &[f64]) -> Option<ConcaveCurve> {
        closed_form::exact_k_curve(couple, a)
    }
}

/// The rearrangement formula on the unweighted `{l_1, l_inf}` couple,
/// `K = K_1` only.
pub struct L1LinfClosedForm;

impl KStrategy for L1LinfClosedForm {
    fn name(&self) -> &'static str {
        "l1-linf"
    }

    fn supports(&self, couple: &Couple, p: Exponent) -> bool {
        couple.is_unweighted_l1_linf() && p == Exponent::Finite(1.0)
    }

    fn evaluate(
        &self,
        couple: &Couple,
        a: &[f64],
        t: f64,
        p: Exponent,
        _tol: f64,
    ) -> Result<KResult, KError> {
        if !self.supports(couple, p) {
            return Err(KError::Unsupported {
                strategy: self.name(),
            });
        }
        couple.check_element(a)?;
        let value = closed_form::k_l1_linf(a, t)?;
        Ok(KResult {
            value,
            split: closed_form::k_l1_linf_split(a, t),
        })
    }

    fn exact_curve(&self, couple: &Couple, a: &[f64]) -> Option<ConcaveCurve> {
        if couple.is_unweighted_l1_linf() && couple.check_element(a).is_ok() {
            Some(closed_form::k_l1_linf_curve(a))
        } else {
            None
        }
    }
}

/// The coordinatewise coefficient formula for `K_p` when `p0 = p1 = p`.
pub struct EqualExponentClosedForm;

impl KStrategy for EqualExponentClosedForm {
    fn name(&self) -> &'static str {
        "equal-exponent"
    }

    fn supports(&self, couple: &Couple, p: Exponent) -> bool {
        couple.exponent(Side::Zero) == couple.exponent(Side::One)
            && couple.exponent(Side::Zero) == p
    }

    fn evaluate(
        &self,
        couple: &Couple,
        a: &[f64],
        t: f64,
        p: Exponent,
        _tol: f64,
    ) -> Result<KResult, KError> {
        if !self.supports(couple, p) {
            return Err(KError::Unsupported {
                strategy: self.name(),
            });
        }
        if !(t > 0.0) {
            return Err(KError::NonpositiveT(t));
        }
        closed_form::k_equal_exponent_result(couple, a, t)
    }

    fn exact_curve(&self, couple: &Couple, a: &[f64]) -> Option<ConcaveCurve> {
        if couple.exponent(Side::Zero) == Exponent::Finite(1.0)
            && couple.exponent(Side::One) == Exponent::Finite(1.0)
        {
            closed_form::exact_k_curve(couple, a)
        } else {
            None
        }
    }
}

static GENERAL: GeneralSolver = GeneralSolver;
static L1_LINF: L1LinfClosedForm = L1LinfClosedForm;
static EQUAL_EXPONENT: EqualExponentClosedForm = EqualExponentClosedForm;

/// Registered backends, closed forms first.
pub fn strategies() -> &'static [&'static dyn KStrategy] {
    static ALL: [&dyn KStrategy; 3] = [&L1_LINF, &EQUAL_EXPONENT, &GENERAL];
    &ALL
}

/// Looks a backend up by its registered name; `auto` is resolved per call
/// by [`auto_select`].
pub fn strategy(name: &str) -> Result<&'static dyn KStrategy, KError> {
    strategies()
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| KError::UnknownStrategy(name.to_string()))
}

/// The first registered backend supporting the couple; always succeeds
/// because the general solver supports everything.
pub fn auto_select(couple: &Couple, p: Exponent) -> &'static dyn KStrategy {
    strategies()
        .iter()
        .copied()
        .find(|s| s.supports(couple, p))
        .expect("the general solver supports every couple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rel_err;

    #[test]
    fn registry_resolves_names_and_auto() {
        assert_eq!(strategy("general").unwrap().name(), "general");
        assert_eq!(strategy("l1-linf").unwrap().name(), "l1-linf");
        assert!(matches!(strategy("nope"), Err(KError::UnknownStrategy(_))));

        let c = Couple::l1_linf(3);
        assert_eq!(auto_select(&c, Exponent::Finite(1.0)).name(), "l1-linf");
        assert_eq!(auto_select(&c, Exponent::Infinity).name(), "general");
    }

    #[test]
    fn strategies_agree_where_they_overlap() {
        let c = Couple::l1_linf(4);
        let a = [3.0, -1.0, 2.0, 0.5];
        for t in [0.5, 1.0, 2.5, 6.0] {
            let mut values = Vec::new();
            for s in strategies() {
                if s.supports(&c, Exponent::Finite(1.0)) {
                    values.push(
                        s.evaluate(&c, &a, t, Exponent::Finite(1.0), 1e-10)
                            .unwrap()
                            .value,
                    );
                }
            }
            assert!(values.len() >= 2);
            for v in &values[1..] {
                assert!(rel_err(*v, values[0]) < 1e-9);
            }
        }
    }
}
