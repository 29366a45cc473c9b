//! Weighted sequence couples: two norms sharing one finite coordinate space.

use crate::error::CoupleError;

/// An exponent in `[1, inf]`. Infinity is an explicit case, never a float
/// sentinel, so `(.)^p` is never evaluated with a huge power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self, CoupleError> {
        if p.is_infinite() && p > 0.0 {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(CoupleError::ExponentOutOfRange { value: p })
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// The conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// Selects one of the two sides of a couple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Zero,
    One,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Zero, Side::One];
}

/// A finite weighted sequence couple `{ l_p0(w0), l_p1(w1) }` on a common
/// index set of size `n`. Immutable after construction; both the sum and the
/// intersection of the two spaces are the whole coordinate space, so every
/// vector of length `n` is an element.
#[derive(Debug, Clone, PartialEq)]
pub struct Couple {
    n: usize,
    w0: Vec<f64>,
    w1: Vec<f64>,
    p0: Exponent,
    p1: Exponent,
}

impl Couple {
    /// Validated constructor. Weights must be finite and strictly positive,
    /// lengths must equal `n`, exponents must lie in `[1, inf]`.
    pub fn new(
        n: usize,
        w0: Vec<f64>,
        w1: Vec<f64>,
        p0: Exponent,
        p1: Exponent,
    ) -> Result<Self, CoupleError> {
        if n == 0 {
            return Err(CoupleError::EmptyIndexSet);
        }
        for w in [&w0, &w1] {
            if w.len() != n {
                return Err(CoupleError::DimensionMismatch {
                    expected: n,
                    got: w.len(),
                });
            }
            for (i, &x) in w.iter().enumerate() {
                if !x.is_finite() {
                    return Err(CoupleError::NonFiniteEntry { index: i });
                }
                if x <= 0.0 {
                    return Err(CoupleError::NonpositiveWeight { index: i, value: x });
                }
            }
        }
        Ok(Couple { n, w0, w1, p0, p1 })
    }

    /// The unweighted `{ l_1, l_inf }` couple on `n` coordinates.
    pub fn l1_linf(n: usize) -> Self {
        Couple::new(
            n,
            vec![1.0; n],
            vec![1.0; n],
            Exponent::Finite(1.0),
            Exponent::Infinity,
        )
        .expect("identity weights are valid")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self, side: Side) -> &[f64] {
        match side {
            Side::Zero => &self.w0,
            Side::One => &self.w1,
        }
    }

    pub fn exponent(&self, side: Side) -> Exponent {
        match side {
            Side::Zero => self.p0,
            Side::One => self.p1,
        }
    }

    /// True when both sides carry unit weights with exponents (1, inf).
    pub fn is_unweighted_l1_linf(&self) -> bool {
        self.p0 == Exponent::Finite(1.0)
            && self.p1 == Exponent::Infinity
            && self.w0.iter().all(|&w| w == 1.0)
            && self.w1.iter().all(|&w| w == 1.0)
    }

    /// Validates that `a` can act as an element of this couple.
    pub fn check_element(&self, a: &[f64]) -> Result<(), CoupleError> {
        if a.len() != self.n {
            return Err(CoupleError::DimensionMismatch {
                expected: self.n,
                got: a.len(),
            });
        }
        for (i, &x) in a.iter().enumerate() {
            if !x.is_finite() {
                return Err(CoupleError::NonFiniteEntry { index: i });
            }
        }
        Ok(())
    }

    pub fn element(&self, coords: Vec<f64>) -> Result<Element, CoupleError> {
        self.check_element(&coords)?;
        Ok(Element { coords })
    }

    /// The norm of one side: `(sum (w(m) |a(m)|)^p)^(1/p)`, `max` for `p = inf`.
    pub fn side_norm(&self, side: Side, a: &[f64]) -> f64 {
        let w = self.weights(side);
        debug_assert_eq!(a.len(), self.n);
        weighted_norm(w, a, self.exponent(side))
    }

    /// The couple of dual norms: the dual of `l_p(w)` is `l_p'(1/w)`.
    pub fn dual(&self) -> Couple {
        Couple {
            n: self.n,
            w0: self.w0.iter().map(|w| 1.0 / w).collect(),
            w1: self.w1.iter().map(|w| 1.0 / w).collect(),
            p0: self.p0.conjugate(),
            p1: self.p1.conjugate(),
        }
    }

    /// The couple restricted to a subset of coordinates, keeping weights.
    pub fn restrict(&self, keep: &[usize]) -> Result<Couple, CoupleError> {
        if keep.is_empty() {
            return Err(CoupleError::EmptyIndexSet);
        }
        let mut w0 = Vec::with_capacity(keep.len());
        let mut w1 = Vec::with_capacity(keep.len());
        for &i in keep {
            if i >= self.n {
                return Err(CoupleError::DimensionMismatch {
                    expected: self.n,
                    got: i + 1,
                });
            }
            w0.push(self.w0[i]);
            w1.push(self.w1[i]);
        }
        Couple::new(keep.len(), w0, w1, self.p0, self.p1)
    }
}

/// A vector in the coordinate space of a couple, checked for length and
/// finiteness at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    coords: Vec<f64>,
}

impl Element {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

/// `(sum (w_i |a_i|)^p)^(1/p)` with the max interpretation for `p = inf`.
pub fn weighted_norm(w: &[f64], a: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => a
            .iter()
            .zip(w)
            .map(|(&x, &wi)| wi * x.abs())
            .fold(0.0, f64::max),
        Exponent::Finite(p) if p == 1.0 => a.iter().zip(w).map(|(&x, &wi)| wi * x.abs()).sum(),
        Exponent::Finite(p) => {
            // Scale by the max term so the powers stay in range.
            let m = a
                .iter()
                .zip(w)
                .map(|(&x, &wi)| wi * x.abs())
                .fold(0.0, f64::max);
            if m == 0.0 {
                return 0.0;
            }
            let s: f64 = a
                .iter()
                .zip(w)
                .map(|(&x, &wi)| (wi * x.abs() / m).powf(p))
                .sum();
            m * s.powf(1.0 / p)
        }
    }
}
