//! The general K-functional solver.
//!
//! For monotone norms the optimal split of `a` can be taken coordinatewise
//! between `0` and `a` with matching signs, so the whole problem collapses to
//! the Pareto frontier
//!
//! ```text
//! g(v) = min { ||a - x||_0 : ||x||_1 <= v, 0 <= x <= |a| },
//! ```
//!
//! a convex nonincreasing function of the budget `v`. Every `K_p` is then a
//! one-dimensional convex minimization `min_v M_p(g(v), t v)` over
//! `v in [0, ||a||_1]`, with `M_p` the `l_p`-combination of the two numbers.
//! `g` itself is evaluated exactly: closed forms where an `inf`-side gives
//! clipping, a monotone level search where the `sup`-norm sits on the left,
//! and a separable Lagrangian with per-coordinate stationarity elsewhere.
//! Bisection budgets are fixed, so results are deterministic.

use crate::couple::{weighted_norm, Couple, Exponent, Side};
use crate::error::KError;
use crate::numerics::{bisect_nonincreasing, golden_min};

use super::{KResult, Split};

const OUTER_ITERS: usize = 95;
const BISECT_ITERS: usize = 80;
const COORD_ITERS: usize = 60;

/// `(u^p + w^p)^(1/p)` for `u, w >= 0`, with the max interpretation at
/// `p = inf`.
pub(crate) fn lp_combine(u: f64, w: f64, p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => u.max(w),
        Exponent::Finite(p) if p == 1.0 => u + w,
        Exponent::Finite(p) => {
            let m = u.max(w);
            if m == 0.0 {
                0.0
            } else {
                m * ((u / m).powf(p) + (w / m).powf(p)).powf(1.0 / p)
            }
        }
    }
}

pub(crate) struct Frontier<'c> {
    couple: &'c Couple,
    abs: Vec<f64>,
    signs: Vec<f64>,
    v_max: f64,
}

impl<'c> Frontier<'c> {
    pub fn new(couple: &'c Couple, a: &[f64]) -> Self {
        let abs: Vec<f64> = a.iter().map(|x| x.abs()).collect();
        let signs: Vec<f64> = a
            .iter()
            .map(|x| if *x < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let v_max = couple.side_norm(Side::One, a);
        Frontier {
            couple,
            abs,
            signs,
            v_max,
        }
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    fn norm0(&self, x: &[f64]) -> f64 {
        weighted_norm(
            self.couple.weights(Side::Zero),
            x,
            self.couple.exponent(Side::Zero),
        )
    }

    fn norm1(&self, x: &[f64]) -> f64 {
        weighted_norm(
            self.couple.weights(Side::One),
            x,
            self.couple.exponent(Side::One),
        )
    }

    /// The frontier value together with the minimizing `x` (in absolute
    /// coordinates, `0 <= x <= |a|`).
    pub fn g_with_x(&self, v: f64) -> (f64, Vec<f64>) {
        let n = self.abs.len();
        if v <= 0.0 {
            return (self.norm0(&self.abs), vec![0.0; n]);
        }
        if v >= self.v_max {
            return (0.0, self.abs.clone());
        }
        let w0 = self.couple.weights(Side::Zero);
        let w1 = self.couple.weights(Side::One);
        let p0 = self.couple.exponent(Side::Zero);
        let p1 = self.couple.exponent(Side::One);

        let x = match (p0, p1) {
            // sup-constraint: clipping is optimal for any monotone left norm.
            (_, Exponent::Infinity) => self
                .abs
                .iter()
                .zip(w1)
                .map(|(&a, &w)| a.min(v / w))
                .collect::<Vec<f64>>(),
            // sup-objective: level search, smallest s with residual budget
            // within v.
            (Exponent::Infinity, _) => {
                let s_max = self
                    .abs
                    .iter()
                    .zip(w0)
                    .map(|(&a, &w)| w * a)
                    .fold(0.0f64, f64::max);
                let residual = |s: f64| {
                    let x: Vec<f64> = self
                        .abs
                        .iter()
                        .zip(w0)
                        .map(|(&a, &w)| (a - s / w).max(0.0))
                        .collect();
                    self.norm1(&x)
                };
                let s = if residual(0.0) <= v {
                    0.0
                } else {
                    bisect_nonincreasing(residual, v, 0.0, s_max, BISECT_ITERS)
                };
                self.abs
                    .iter()
                    .zip(w0)
                    .map(|(&a, &w)| (a - s / w).max(0.0))
                    .collect::<Vec<f64>>()
            }
            // Both norms are sums: continuous knapsack by cost ratio.
            (Exponent::Finite(q0), Exponent::Finite(q1)) if q0 == 1.0 && q1 == 1.0 => {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&i, &j| (w0[j] / w1[j]).partial_cmp(&(w0[i] / w1[i])).unwrap());
                let mut x = vec![0.0; n];
                let mut budget = v;
                for i in order {
                    if budget <= 0.0 {
                        break;
                    }
                    let take = self.abs[i].min(budget / w1[i]);
                    x[i] = take;
                    budget -= w1[i] * take;
                }
                x
            }
            // Separable Lagrangian: x(theta) decreases continuously in the
            // multiplier, so bisect it to meet the budget exactly.
            (Exponent::Finite(q0), Exponent::Finite(q1)) => {
                let x_of_theta = |theta: f64| -> Vec<f64> {
                    (0..n)
                        .map(|i| lagrange_coordinate(self.abs[i], w0[i], w1[i], q0, q1, theta))
                        .collect()
                };
                let spent = |theta: f64| self.norm1(&x_of_theta(theta));
                let mut hi = 1.0;
                let mut grow = 0;
                while spent(hi) > v && grow < 200 {
                    hi *= 4.0;
                    grow += 1;
                }
                let mut lo = hi / 4.0;
                while spent(lo) < v && lo > f64::MIN_POSITIVE {
                    lo /= 4.0;
                }
                let theta = bisect_nonincreasing(spent, v, lo, hi, BISECT_ITERS);
                let mut x = x_of_theta(theta);
                let r = self.norm1(&x);
                if r > v && r > 0.0 {
                    let c = v / r;
                    for xi in &mut x {
                        *xi *= c;
                    }
                }
                x
            }
        };
        let residual: Vec<f64> = self.abs.iter().zip(&x).map(|(a, xi)| a - xi).collect();
        (self.norm0(&residual), x)
    }

    pub fn g(&self, v: f64) -> f64 {
        self.g_with_x(v).0
    }

    fn split_from_x(&self, x: &[f64]) -> Split {
        let a1: Vec<f64> = x.iter().zip(&self.signs).map(|(xi, s)| xi * s).collect();
        let a0: Vec<f64> = self
            .abs
            .iter()
            .zip(x)
            .zip(&self.signs)
            .map(|((a, xi), s)| (a - xi) * s)
            .collect();
        Split { a0, a1 }
    }
}

/// Minimizes `(w0 (a - x))^q0 + theta (w1 x)^q1` over `x in [0, a]`.
fn lagrange_coordinate(a: f64, w0: f64, w1: f64, q0: f64, q1: f64, theta: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if q0 == 1.0 {
        // w0 = theta q1 w1^q1 x^(q1-1) at the stationary point.
        let x = (w0 / (theta * q1 * w1.powf(q1))).powf(1.0 / (q1 - 1.0));
        return x.min(a);
    }
    if q1 == 1.0 {
        let d = (theta * w1 / (q0 * w0.powf(q0))).powf(1.0 / (q0 - 1.0));
        return (a - d).max(0.0);
    }
    if q0 == q1 {
        // Equal exponents solve in closed form: x/(a-x) is a power of the
        // weight ratio.
        let r = if q0 == 2.0 {
            w0 * w0 / (theta * w1 * w1)
        } else {
            (w0.powf(q0) / (theta * w1.powf(q1))).powf(1.0 / (q0 - 1.0))
        };
        if r.is_infinite() {
            return a;
        }
        return a * r / (1.0 + r);
    }
    // General case: the derivative is monotone in x; bisect its sign change.
    let deriv = |x: f64| {
        theta * q1 * w1.powf(q1) * x.powf(q1 - 1.0) - q0 * w0.powf(q0) * (a - x).powf(q0 - 1.0)
    };
    if deriv(0.0) >= 0.0 {
        return 0.0;
    }
    if deriv(a) <= 0.0 {
        return a;
    }
    let mut lo = 0.0;
    let mut hi = a;
    for _ in 0..COORD_ITERS {
        let m = 0.5 * (lo + hi);
        if deriv(m) < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// `K_p(t, a)` with a witnessing split, via the frontier reduction: golden
/// section on the convex objective `M_p(g(v), t v)` over the budget `v`.
/// Convexity in `v` keeps golden section sound even across the flat
/// stretches the multiplier parametrization would introduce.
pub(crate) fn k_via_frontier(
    couple: &Couple,
    a: &[f64],
    t: f64,
    p: Exponent,
    _tol: f64,
) -> Result<KResult, KError> {
    couple.check_element(a)?;
    if !(t > 0.0) {
        return Err(KError::NonpositiveT(t));
    }
    let n = couple.len();
    if a.iter().all(|&x| x == 0.0) {
        return Ok(KResult {
            value: 0.0,
            split: Split {
                a0: vec![0.0; n],
                a1: vec![0.0; n],
            },
        });
    }
    let frontier = Frontier::new(couple, a);
    let objective = |v: f64| lp_combine(frontier.g(v), t * v, p);
    let (v_best, _) = golden_min(objective, 0.0, frontier.v_max(), OUTER_ITERS);
    let (_, x) = frontier.g_with_x(v_best);
    let split = frontier.split_from_x(&x);
    let value = split.objective(couple, t, p);
    if !value.is_finite() {
        return Err(KError::NonConvergence {
            lower: 0.0,
            upper: value,
        });
    }
    Ok(KResult { value, split })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rel_err;

    fn couple(w0: &[f64], w1: &[f64], p0: f64, p1: f64) -> Couple {
        let e = |p: f64| Exponent::new(p).unwrap();
        Couple::new(w0.len(), w0.to_vec(), w1.to_vec(), e(p0), e(p1)).unwrap()
    }

    /// Brute force over a fine split grid, for small n.
    fn brute_k(c: &Couple, a: &[f64], t: f64, p: Exponent, steps: usize) -> f64 {
        let n = a.len();
        let mut best = f64::INFINITY;
        let mut idx = vec![0usize; n];
        loop {
            let a1: Vec<f64> = idx
                .iter()
                .zip(a)
                .map(|(&k, &ai)| ai * (k as f64) / (steps as f64))
                .collect();
            let a0: Vec<f64> = a.iter().zip(&a1).map(|(ai, x)| ai - x).collect();
            let u = c.side_norm(Side::Zero, &a0);
            let w = t * c.side_norm(Side::One, &a1);
            best = best.min(lp_combine(u, w, p));
            let mut j = 0;
            loop {
                if j == n {
                    return best;
                }
                idx[j] += 1;
                if idx[j] <= steps {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    #[test]
    fn matches_brute_force_on_l1_linf() {
        let c = Couple::l1_linf(3);
        let a = [3.0, 1.0, 2.0];
        let r = k_via_frontier(&c, &a, 2.0, Exponent::Finite(1.0), 1e-9).unwrap();
        assert!(rel_err(r.value, 5.0) < 1e-10, "got {}", r.value);
        let r = k_via_frontier(&c, &a, 1.0, Exponent::Infinity, 1e-9).unwrap();
        assert!(rel_err(r.value, 5.0 / 3.0) < 1e-10, "got {}", r.value);
    }

    #[test]
    fn split_recomposes_and_witnesses_value() {
        let c = couple(&[1.0, 2.0, 0.5], &[2.0, 1.0, 1.0], 2.0, 1.0);
        let a = [1.0, -2.0, 0.7];
        let t = 0.8;
        let r = k_via_frontier(&c, &a, t, Exponent::Finite(2.0), 1e-9).unwrap();
        for i in 0..3 {
            assert!((r.split.a0[i] + r.split.a1[i] - a[i]).abs() < 1e-12);
        }
        let u = c.side_norm(Side::Zero, &r.split.a0);
        let w = t * c.side_norm(Side::One, &r.split.a1);
        assert!(rel_err(lp_combine(u, w, Exponent::Finite(2.0)), r.value) < 1e-12);
    }

    #[test]
    fn matches_brute_force_on_mixed_exponents() {
        let cases = [
            (
                couple(&[1.0, 2.0], &[2.0, 1.0], 1.0, 1.0),
                Exponent::Finite(1.0),
            ),
            (
                couple(&[1.0, 0.5], &[1.0, 1.5], 2.0, 2.0),
                Exponent::Finite(2.0),
            ),
            (
                couple(&[1.0, 1.0], &[1.0, 1.0], f64::INFINITY, 1.0),
                Exponent::Finite(1.0),
            ),
            (
                couple(&[2.0, 1.0], &[1.0, 3.0], f64::INFINITY, f64::INFINITY),
                Exponent::Infinity,
            ),
            (
                couple(&[1.0, 1.0], &[1.0, 1.0], 3.0, 1.5),
                Exponent::Finite(2.5),
            ),
        ];
        let a = [1.0, -2.0];
        for (c, p) in cases {
            for t in [0.25, 1.0, 3.0] {
                let fast = k_via_frontier(&c, &a, t, p, 1e-10).unwrap().value;
                let slow = brute_k(&c, &a, t, p, 400);
                assert!(
                    rel_err(fast, slow) < 2e-3,
                    "p={p:?} t={t}: frontier {fast} vs brute {slow}"
                );
                assert!(fast <= slow + 1e-9 * slow.abs());
            }
        }
    }

    #[test]
    fn zero_element_gives_zero() {
        let c = Couple::l1_linf(4);
        let r = k_via_frontier(&c, &[0.0; 4], 2.0, Exponent::Finite(1.0), 1e-9).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn equal_exponent_scalar_case() {
        // K_2(1, 1) on the scalar couple with unit weights is 1/sqrt(2).
        let c = couple(&[1.0], &[1.0], 2.0, 2.0);
        let r = k_via_frontier(&c, &[1.0], 1.0, Exponent::Finite(2.0), 1e-10).unwrap();
        assert!(rel_err(r.value, 1.0 / 2.0f64.sqrt()) < 1e-10);
    }
}
