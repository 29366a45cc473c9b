//! Subcouples (coordinate and spanned) with restricted-split K-functionals,
//! the K-agreement test, and quotients by coordinate subspaces.

use crate::couple::{Couple, Side};
use crate::curve::ConcaveCurve;
use crate::error::StructureError;
use crate::kfun;
use crate::numerics::{nested_golden_min, solve_dense};

const MAX_SPAN_DIM: usize = 3;

#[derive(Debug, Clone)]
pub enum SubcoupleKind {
    /// The coordinate subspace spanned by the kept indices, inherited norms.
    Coordinates(Vec<usize>),
    /// A general linear subspace given by a basis, inherited norms.
    /// Its K is a brute-force infimum over splits inside the span, so the
    /// dimension is capped at desk scale.
    Span(Vec<Vec<f64>>),
}

#[derive(Debug, Clone)]
pub struct SubcoupleSpec {
    ambient: Couple,
    kind: SubcoupleKind,
}

impl SubcoupleSpec {
    pub fn coordinates(ambient: Couple, mut keep: Vec<usize>) -> Result<Self, StructureError> {
        if keep.is_empty() {
            return Err(StructureError::EmptyKeepSet);
        }
        keep.sort_unstable();
        keep.dedup();
        for &i in &keep {
            if i >= ambient.len() {
                return Err(StructureError::IndexOutOfBounds(i));
            }
        }
        Ok(SubcoupleSpec {
            ambient,
            kind: SubcoupleKind::Coordinates(keep),
        })
    }

    pub fn span(ambient: Couple, basis: Vec<Vec<f64>>) -> Result<Self, StructureError> {
        if basis.is_empty() {
            return Err(StructureError::EmptyKeepSet);
        }
        if basis.len() > MAX_SPAN_DIM {
            return Err(StructureError::SpanTooLarge {
                max: MAX_SPAN_DIM,
                got: basis.len(),
            });
        }
        for v in &basis {
            ambient.check_element(v)?;
        }
        // Independence via the Gram determinant.
        let k = basis.len();
        let mut gram = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                gram[i * k + j] = dot(&basis[i], &basis[j]);
            }
        }
        let scale = (0..k).map(|i| gram[i * k + i]).fold(0.0f64, f64::max);
        if solve_dense(&gram, &vec![0.0; k], k).is_none() || scale == 0.0 {
            return Err(StructureError::DependentBasis);
        }
        Ok(SubcoupleSpec {
            ambient,
            kind: SubcoupleKind::Span(basis),
        })
    }

    pub fn ambient(&self) -> &Couple {
        &self.ambient
    }

    pub fn kind(&self) -> &SubcoupleKind {
        &self.kind
    }

    /// Coordinates of `a` in the span basis (least squares); `None` when `a`
    /// is not in the subspace.
    pub fn span_coordinates(&self, a: &[f64]) -> Option<Vec<f64>> {
        let basis = match &self.kind {
            SubcoupleKind::Span(b) => b,
            SubcoupleKind::Coordinates(_) => return None,
        };
        let k = basis.len();
        let mut gram = vec![0.0; k * k];
        let mut rhs = vec![0.0; k];
        for i in 0..k {
            rhs[i] = dot(&basis[i], a);
            for j in 0..k {
                gram[i * k + j] = dot(&basis[i], &basis[j]);
            }
        }
        let z = solve_dense(&gram, &rhs, k)?;
        let recon = combine(basis, &z, a.len());
        let scale = a.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let ok = recon
            .iter()
            .zip(a)
            .all(|(r, x)| (r - x).abs() <= 1e-9 * scale);
        ok.then_some(z)
    }

    /// Whether `a` (ambient coordinates) lies in the subcouple.
    pub fn contains(&self, a: &[f64]) -> bool {
        match &self.kind {
            SubcoupleKind::Coordinates(keep) => a
                .iter()
                .enumerate()
                .all(|(i, &x)| x == 0.0 || keep.binary_search(&i).is_ok()),
            SubcoupleKind::Span(_) => self.span_coordinates(a).is_some(),
        }
    }

    /// `K(t, a)` with both split halves constrained to the subcouple.
    pub fn sub_k(&self, a: &[f64], t: f64) -> Result<f64, StructureError> {
        self.ambient.check_element(a)?;
        match &self.kind {
            SubcoupleKind::Coordinates(keep) => {
                let restricted = self.ambient.restrict(keep)?;
                let sub_a: Vec<f64> = keep.iter().map(|&i| a[i]).collect();
                Ok(kfun::k(&restricted, &sub_a, t)?)
            }
            SubcoupleKind::Span(basis) => {
                let z0 = self
                    .span_coordinates(a)
                    .ok_or(StructureError::DependentBasis)?;
                let n = a.len();
                let f = |z: &[f64]| {
                    let a1 = combine(basis, z, n);
                    let a0: Vec<f64> = a.iter().zip(&a1).map(|(x, y)| x - y).collect();
                    self.ambient.side_norm(Side::Zero, &a0)
                        + t * self.ambient.side_norm(Side::One, &a1)
                };
                // Any optimal split keeps t*||a1||_1 below the value at z=0.
                let cap = self.ambient.side_norm(Side::Zero, a);
                let radius = z0
                    .iter()
                    .map(|z| z.abs())
                    .fold(1.0f64, f64::max)
                    .max(cap / t.max(1e-12))
                    * 4.0
                    + 1.0;
                let bounds: Vec<(f64, f64)> = (0..basis.len()).map(|_| (-radius, radius)).collect();
                Ok(nested_golden_min(&f, &bounds, 80).1)
            }
        }
    }

    /// The exact K-curve of the subcouple where one exists: coordinate
    /// subcouples inherit the ambient closed forms; one-dimensional spans
    /// are scalar couples with the two-line curve `min(||v||_0, t ||v||_1)`.
    pub fn sub_k_curve(&self, a: &[f64]) -> Option<ConcaveCurve> {
        match &self.kind {
            SubcoupleKind::Coordinates(keep) => {
                let restricted = self.ambient.restrict(keep).ok()?;
                let sub_a: Vec<f64> = keep.iter().map(|&i| a[i]).collect();
                kfun::k_curve(&restricted, &sub_a)
            }
            SubcoupleKind::Span(basis) if basis.len() == 1 => {
                let z = self.span_coordinates(a)?;
                let c = z[0].abs();
                let n0 = c * self.ambient.side_norm(Side::Zero, &basis[0]);
                let n1 = c * self.ambient.side_norm(Side::One, &basis[0]);
                if n0 == 0.0 || n1 == 0.0 {
                    return ConcaveCurve::from_breakpoints(vec![1.0], vec![0.0], 0.0, 0.0).ok();
                }
                let tau = n0 / n1;
                ConcaveCurve::from_breakpoints(vec![tau], vec![n0], n1, 0.0).ok()
            }
            SubcoupleKind::Span(_) => None,
        }
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn combine(basis: &[Vec<f64>], z: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (v, &c) in basis.iter().zip(z) {
        for i in 0..n {
            out[i] += c * v[i];
        }
    }
    out
}

/// A failed K-agreement instance: the element, the t, and both values.
#[derive(Debug, Clone)]
pub struct BSubcoupleWitness {
    pub element: Vec<f64>,
    pub t: f64,
    pub sub_k: f64,
    pub ambient_k: f64,
}

#[derive(Debug, Clone)]
pub struct BSubcoupleReport {
    pub holds: bool,
    pub witness: Option<BSubcoupleWitness>,
}

/// Checks `K(t, a; sub) = K(t, a; ambient)` for the sample elements across
/// the t-grid. The `>=` direction holds for every subcouple (the sub-infimum
/// ranges over fewer splits) and is asserted; a violation beyond solver
/// slack would be a solver bug.
pub fn is_b_subcouple(
    spec: &SubcoupleSpec,
    samples: &[Vec<f64>],
    t_grid: &[f64],
) -> Result<BSubcoupleReport, StructureError> {
    for a in samples {
        if !spec.contains(a) {
            return Err(StructureError::DependentBasis);
        }
        for &t in t_grid {
            let sub = spec.sub_k(a, t)?;
            let amb = kfun::k(spec.ambient(), a, t)?;
            let scale = sub.abs().max(amb.abs()).max(1e-300);
            assert!(
                sub >= amb - 1e-7 * scale,
                "one-sided K inequality violated: sub {sub} < ambient {amb}"
            );
            if (sub - amb).abs() > 1e-7 * scale {
                return Ok(BSubcoupleReport {
                    holds: false,
                    witness: Some(BSubcoupleWitness {
                        element: a.clone(),
                        t,
                        sub_k: sub,
                        ambient_k: amb,
                    }),
                });
            }
        }
    }
    Ok(BSubcoupleReport {
        holds: true,
        witness: None,
    })
}

/// Quotient of a diagonal couple by the coordinate subspace on `kill`:
/// the couple on the remaining coordinates with the same weights (the
/// infimum over killed coordinates is attained at zero fill). Returns the
/// quotient couple and the kept indices. An empty `kill` is the identity
/// quotient.
pub fn quotient_couple(
    ambient: &Couple,
    kill: &[usize],
) -> Result<(Couple, Vec<usize>), StructureError> {
    let mut killed = kill.to_vec();
    killed.sort_unstable();
    killed.dedup();
    for &i in &killed {
        if i >= ambient.len() {
            return Err(StructureError::IndexOutOfBounds(i));
        }
    }
    let kept: Vec<usize> = (0..ambient.len())
        .filter(|i| killed.binary_search(i).is_err())
        .collect();
    if kept.is_empty() {
        return Err(StructureError::KillsEverything);
    }
    Ok((ambient.restrict(&kept)?, kept))
}

/// Checks the quotient K-identity on samples: `K(t, [b]; quotient)` must
/// match `inf_c K(t, b + c; ambient)` over the killed subspace. For diagonal
/// couples the infimum is attained by zeroing the killed coordinates, and a
/// family of probe fills must never beat it.
pub fn is_b_quotient(
    ambient: &Couple,
    kill: &[usize],
    samples: &[Vec<f64>],
    t_grid: &[f64],
) -> Result<bool, StructureError> {
    let (quot, kept) = quotient_couple(ambient, kill)?;
    let mut killed = kill.to_vec();
    killed.sort_unstable();
    killed.dedup();
    for b in samples {
        ambient.check_element(b)?;
        let class_rep: Vec<f64> = kept.iter().map(|&i| b[i]).collect();
        let mut zero_filled = b.clone();
        for &i in &killed {
            zero_filled[i] = 0.0;
        }
        for &t in t_grid {
            let lhs = kfun::k(&quot, &class_rep, t)?;
            let attained = kfun::k(ambient, &zero_filled, t)?;
            let scale = lhs.abs().max(attained.abs()).max(1e-300);
            if (lhs - attained).abs() > 1e-7 * scale {
                return Ok(false);
            }
            // Probe fills must not go below the quotient value.
            for &i in &killed {
                for fill in [-1.0, 1.0, -0.5, 0.5] {
                    let mut c = zero_filled.clone();
                    c[i] = fill * (1.0 + b[i].abs());
                    let probed = kfun::k(ambient, &c, t)?;
                    if probed < lhs - 1e-7 * scale {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
