//! Exact arithmetic on nonnegative, nondecreasing, concave piecewise-linear
//! functions on `(0, inf)`: the shape every K-curve takes on a finite couple.
//!
//! A curve is stored as breakpoints `t_1 < ... < t_k` with values `phi(t_i)`,
//! a slope on `(0, t_1]` and a slope on `[t_k, inf)`. Slopes between
//! breakpoints are re-derived from the values at construction and
//! cross-checked against concavity and monotonicity, so an invalid curve can
//! not be built.

use crate::error::CurveError;

const SLOPE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ConcaveCurve {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    initial_slope: f64,
    terminal_slope: f64,
}

impl ConcaveCurve {
    /// Builds a curve from breakpoint data, validating every invariant:
    /// strictly increasing positive breakpoints, nonnegative nondecreasing
    /// values, nonincreasing slopes, `phi(0+) >= 0`, terminal slope `>= 0`.
    pub fn from_breakpoints(
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        initial_slope: f64,
        terminal_slope: f64,
    ) -> Result<Self, CurveError> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(CurveError::BadBreakpoints);
        }
        let mut prev_t = 0.0;
        for &t in &breakpoints {
            if !t.is_finite() || t <= prev_t {
                return Err(CurveError::BadBreakpoints);
            }
            prev_t = t;
        }
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let slack = SLOPE_SLACK * scale.max(initial_slope.abs() * breakpoints[0]);
        let mut prev_v = -slack;
        for &v in &values {
            if !v.is_finite() || v < prev_v {
                return Err(CurveError::NotMonotone);
            }
            if v < -slack {
                return Err(CurveError::NotMonotone);
            }
            prev_v = v;
        }
        if terminal_slope < -SLOPE_SLACK * scale {
            return Err(CurveError::NegativeTerminalSlope);
        }
        let curve = ConcaveCurve {
            breakpoints,
            values,
            initial_slope,
            terminal_slope: terminal_slope.max(0.0),
        };
        let origin = curve.value_at_zero();
        if origin < -slack {
            return Err(CurveError::NegativeOrigin(origin));
        }
        // Concavity: the full slope chain must be nonincreasing.
        let slopes = curve.piece_slopes();
        for (i, pair) in slopes.windows(2).enumerate() {
            if pair[1] > pair[0] + slack / curve.piece_width(i).max(f64::MIN_POSITIVE) {
                return Err(CurveError::NotConcave);
            }
        }
        Ok(curve)
    }

    /// Curve with integer breakpoints `1..=k` whose slope on `(i, i+1)` is
    /// `slopes[i]`; eventually constant. Requires slopes nonincreasing `>= 0`.
    pub fn from_integer_slopes(slopes: &[f64]) -> Result<Self, CurveError> {
        if slopes.is_empty() {
            return Err(CurveError::EmptyInput);
        }
        let mut values = Vec::with_capacity(slopes.len());
        let mut acc = 0.0;
        for &s in slopes {
            acc += s;
            values.push(acc);
        }
        let breakpoints = (1..=slopes.len()).map(|i| i as f64).collect();
        ConcaveCurve::from_breakpoints(breakpoints, values, slopes[0], 0.0)
    }

    /// The least concave nondecreasing majorant of a finite point set,
    /// anchored at the origin: the result is the upper concave hull of the
    /// points together with `(0, 0)`, continued as a constant after the last
    /// surviving breakpoint. Exact for the given points.
    pub fn least_concave_majorant(points: &[(f64, f64)]) -> Result<Self, CurveError> {
        if points.is_empty() {
            return Err(CurveError::EmptyInput);
        }
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(points.len() + 1);
        for &(t, y) in points {
            if !t.is_finite() || !y.is_finite() || t < 0.0 {
                return Err(CurveError::BadBreakpoints);
            }
            pts.push((t, y.max(0.0)));
        }
        pts.push((0.0, 0.0));
        hull_curve(pts, 0.0)
    }

    /// Pointwise maximum of two curves followed by the least concave
    /// majorant. The hull of the union of the two hypographs is computed on
    /// the union of the breakpoints; the terminal ray takes the larger slope.
    pub fn max(&self, other: &ConcaveCurve) -> ConcaveCurve {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        pts.push((0.0, self.value_at_zero().max(other.value_at_zero())));
        for &t in self.breakpoints.iter().chain(other.breakpoints.iter()) {
            let v = self.eval_unchecked(t).max(other.eval_unchecked(t));
            pts.push((t, v));
        }
        let terminal = self.terminal_slope.max(other.terminal_slope);
        hull_curve(pts, terminal).expect("max of valid curves is a valid curve")
    }

    /// Exact pointwise comparison `self <= other` on all of `(0, inf)`.
    /// Piecewise linearity makes the check at the union of breakpoints,
    /// the limits at `0+` and the two terminal slopes sufficient.
    pub fn leq(&self, other: &ConcaveCurve) -> bool {
        self.leq_witness(other).is_none()
    }

    /// Returns the smallest violating `t` when `self(t) > other(t)`
    /// somewhere, else `None`. The scale-relative slack avoids flagging
    /// floating-point noise on curves that agree.
    pub fn leq_witness(&self, other: &ConcaveCurve) -> Option<f64> {
        let scale = self
            .values
            .iter()
            .chain(other.values.iter())
            .fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-12 * scale;
        let mut checks: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .copied()
            .collect();
        checks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        checks.dedup();

        // Limit at 0+ first: violation there holds on an interval (0, d).
        let f0 = self.value_at_zero();
        let g0 = other.value_at_zero();
        if f0 > g0 + tol {
            let t1 = checks[0];
            let mut w = t1 / 2.0;
            while self.eval_unchecked(w) <= other.eval_unchecked(w) + tol {
                w /= 2.0;
                if w < f64::MIN_POSITIVE {
                    break;
                }
            }
            return Some(w);
        }
        for &t in &checks {
            if self.eval_unchecked(t) > other.eval_unchecked(t) + tol {
                return Some(t);
            }
        }
        // Beyond the last breakpoint both are rays.
        let big = *checks.last().unwrap();
        if self.terminal_slope > other.terminal_slope + tol / big.max(1.0) {
            let df = other.eval_unchecked(big) - self.eval_unchecked(big);
            let ds = self.terminal_slope - other.terminal_slope;
            let cross = big + (df / ds).max(0.0);
            return Some(cross * 1.5 + 1.0);
        }
        None
    }

    pub fn eval(&self, t: f64) -> Result<f64, CurveError> {
        if !(t > 0.0) {
            return Err(CurveError::NonpositiveArgument(t));
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        let bp = &self.breakpoints;
        if t <= bp[0] {
            return self.values[0] - self.initial_slope * (bp[0] - t);
        }
        let k = bp.len();
        if t >= bp[k - 1] {
            return self.values[k - 1] + self.terminal_slope * (t - bp[k - 1]);
        }
        let j = bp.partition_point(|&x| x < t);
        // bp[j-1] < t <= bp[j]
        let (t0, t1) = (bp[j - 1], bp[j]);
        let (v0, v1) = (self.values[j - 1], self.values[j]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// The limit `phi(0+)`.
    pub fn value_at_zero(&self) -> f64 {
        self.values[0] - self.initial_slope * self.breakpoints[0]
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn initial_slope(&self) -> f64 {
        self.initial_slope
    }

    pub fn terminal_slope(&self) -> f64 {
        self.terminal_slope
    }

    /// The full slope chain: initial slope, one slope per interior piece,
    /// terminal slope. Nonincreasing by the construction invariant.
    pub fn piece_slopes(&self) -> Vec<f64> {
        let mut slopes = Vec::with_capacity(self.breakpoints.len() + 1);
        slopes.push(self.initial_slope);
        for i in 1..self.breakpoints.len() {
            let dt = self.breakpoints[i] - self.breakpoints[i - 1];
            slopes.push((self.values[i] - self.values[i - 1]) / dt);
        }
        slopes.push(self.terminal_slope);
        slopes
    }

    fn piece_width(&self, i: usize) -> f64 {
        if i == 0 {
            self.breakpoints[0]
        } else if i < self.breakpoints.len() {
            self.breakpoints[i] - self.breakpoints[i - 1]
        } else {
            1.0
        }
    }

    /// The limit of `phi(t)` as `t -> inf` when the curve is eventually
    /// constant, else `None`.
    pub fn sup_value(&self) -> Option<f64> {
        if self.terminal_slope == 0.0 {
            self.values.last().copied()
        } else {
            None
        }
    }
}

/// Upper concave hull of a point set (which must include a point at `t = 0`),
/// continued to the right with the ray of slope `terminal`. Trailing hull
/// vertices dominated by the ray are dropped, which also enforces
/// monotonicity when `terminal >= 0`.
fn hull_curve(mut pts: Vec<(f64, f64)>, terminal: f64) -> Result<ConcaveCurve, CurveError> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Deduplicate equal t keeping the max y.
    let mut uniq: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for (t, y) in pts {
        match uniq.last_mut() {
            Some(last) if last.0 == t => last.1 = last.1.max(y),
            _ => uniq.push((t, y)),
        }
    }
    // Monotone chain, upper hull. Collinear middle points are dropped.
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(uniq.len());
    for p in uniq {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // Attach the terminal ray: drop vertices under the ray from their
    // predecessor.
    while hull.len() >= 2 {
        let a = hull[hull.len() - 2];
        let b = hull[hull.len() - 1];
        let slope = (b.1 - a.1) / (b.0 - a.0);
        if slope <= terminal {
            hull.pop();
        } else {
            break;
        }
    }
    let origin = hull[0];
    debug_assert_eq!(origin.0, 0.0);
    let interior: Vec<(f64, f64)> = hull.into_iter().skip(1).collect();
    if interior.is_empty() {
        // Constant (or pure-ray) curve: synthesize one breakpoint.
        return ConcaveCurve::from_breakpoints(
            vec![1.0],
            vec![origin.1 + terminal],
            terminal,
            terminal,
        );
    }
    let initial = (interior[0].1 - origin.1) / interior[0].0;
    let (bps, vals): (Vec<f64>, Vec<f64>) = interior.into_iter().unzip();
    ConcaveCurve::from_breakpoints(bps, vals, initial, terminal)
}
