//! Small 1-D routines shared by the solvers: golden-section minimization on
//! convex functions and monotone bisection. Everything here is deterministic
//! with fixed iteration budgets.

/// Golden-section minimization of a convex function on `[lo, hi]`.
/// Returns the best evaluated point and value (endpoints included).
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut best = (a, f(a));
    let fb_end = f(b);
    if fb_end < best.1 {
        best = (b, fb_end);
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        if b - a <= f64::MIN_POSITIVE {
            break;
        }
    }
    for (x, fx) in [(x1, f1), (x2, f2)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Finds `x` in `[lo, hi]` with `f(x) ~= target` for a nonincreasing `f`
/// with `f(lo) >= target >= f(hi)`. Returns the midpoint of the final
/// bracket.
pub(crate) fn bisect_nonincreasing(
    f: impl Fn(f64) -> f64,
    target: f64,
    lo: f64,
    hi: f64,
    iters: usize,
) -> f64 {
    let mut a = lo;
    let mut b = hi;
    for _ in 0..iters {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if f(m) > target {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Relative gap helper used throughout the tests and solvers.
pub fn rel_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1e-300)
}

/// Minimizes a jointly convex function over a box by nested golden sections:
/// the partial minimum over the leading variables is again convex in the
/// last one. Cost grows exponentially in the dimension; callers keep `k`
/// at desk scale.
pub(crate) fn nested_golden_min(
    f: &dyn Fn(&[f64]) -> f64,
    bounds: &[(f64, f64)],
    iters: usize,
) -> (Vec<f64>, f64) {
    match bounds.len() {
        0 => (Vec::new(), f(&[])),
        1 => {
            let (x, v) = golden_min(|x| f(&[x]), bounds[0].0, bounds[0].1, iters);
            (vec![x], v)
        }
        _ => {
            let (head, last) = bounds.split_at(bounds.len() - 1);
            let inner = |x: f64| {
                let g = |z: &[f64]| {
                    let mut full = z.to_vec();
                    full.push(x);
                    f(&full)
                };
                nested_golden_min(&g, head, iters).1
            };
            let (x, _) = golden_min(inner, last[0].0, last[0].1, iters);
            let g = |z: &[f64]| {
                let mut full = z.to_vec();
                full.push(x);
                f(&full)
            };
            let (mut z, v) = nested_golden_min(&g, head, iters);
            z.push(x);
            (z, v)
        }
    }
}

/// Solves a small dense linear system by Gaussian elimination with partial
/// pivoting. Returns `None` on (numerical) singularity.
pub(crate) fn solve_dense(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if m[r * n + col].abs() > m[piv * n + col].abs() {
                piv = r;
            }
        }
        if m[piv * n + col].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                m.swap(col * n + j, piv * n + j);
            }
            rhs.swap(col, piv);
        }
        let d = m[col * n + col];
        for r in (col + 1)..n {
            let factor = m[r * n + col] / d;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                m[r * n + j] -= factor * m[col * n + j];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut s = rhs[col];
        for j in (col + 1)..n {
            s -= m[col * n + j] * x[j];
        }
        x[col] = s / m[col * n + col];
    }
    Some(x)
}
