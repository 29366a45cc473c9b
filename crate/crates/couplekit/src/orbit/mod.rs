//! The orbit problem: K-domination tests, explicit operator construction,
//! the coordinatewise kernel condition, and the fundamental-lemma
//! decomposition with measured constants.

mod hlp;
mod level_interp;

pub use hlp::{hlp_construct, HlpCertificate, HlpOperator};
pub use level_interp::{level_interp_operator, LevelInterpOperator};

use crate::couple::{Couple, Exponent, Side};
use crate::error::OrbitError;
use crate::kfun;

/// Outcome of the Gagliardo domination test `K(t, b) <= K(t, a)` for all t.
#[derive(Debug, Clone)]
pub struct DominationReport {
    pub holds: bool,
    /// The first violating `t` when the test fails.
    pub witness: Option<f64>,
    /// The smallest observed gap `K(t, a) - K(t, b)` over the checkpoints
    /// when the test holds.
    pub margin: f64,
}

/// Tests the domination condition. When both K-curves exist in closed form
/// the comparison is exact (breakpoint checking); otherwise the curves are
/// compared on a dyadic grid through the general solver.
pub fn dominates(
    couple_a: &Couple,
    a: &[f64],
    couple_b: &Couple,
    b: &[f64],
) -> Result<DominationReport, OrbitError> {
    couple_a.check_element(a)?;
    couple_b.check_element(b)?;
    if let (Some(ka), Some(kb)) = (kfun::k_curve(couple_a, a), kfun::k_curve(couple_b, b)) {
        if let Some(w) = kb.leq_witness(&ka) {
            return Ok(DominationReport {
                holds: false,
                witness: Some(w),
                margin: 0.0,
            });
        }
        let mut checkpoints: Vec<f64> = ka
            .breakpoints()
            .iter()
            .chain(kb.breakpoints())
            .copied()
            .collect();
        checkpoints.push(2.0 * checkpoints.iter().fold(1.0f64, |m, t| m.max(*t)));
        let margin = checkpoints
            .iter()
            .map(|&t| ka.eval_unchecked(t) - kb.eval_unchecked(t))
            .fold(f64::INFINITY, f64::min)
            .max(0.0);
        return Ok(DominationReport {
            holds: true,
            witness: None,
            margin,
        });
    }
    let grid: Vec<f64> = (-48..=48).map(|k| 2.0f64.powf(k as f64 / 4.0)).collect();
    let mut margin = f64::INFINITY;
    for &t in &grid {
        let ka = kfun::k(couple_a, a, t)?;
        let kb = kfun::k(couple_b, b, t)?;
        let scale = ka.abs().max(kb.abs()).max(1e-300);
        if kb > ka + 1e-9 * scale {
            return Ok(DominationReport {
                holds: false,
                witness: Some(t),
                margin: 0.0,
            });
        }
        margin = margin.min((ka - kb).max(0.0));
    }
    Ok(DominationReport {
        holds: true,
        witness: None,
        margin,
    })
}

/// The coordinatewise kernel condition for weighted-l1 sources:
/// `|b(m)| <= sum_n min(w0(m)/w0(n), w1(m)/w1(n)) |a(n)|` for every `m`.
/// Returns the first violating index on failure.
pub fn min_kernel_check(w0: &[f64], w1: &[f64], a: &[f64], b: &[f64]) -> (bool, Option<usize>) {
    let n = a.len();
    let scale = a.iter().chain(b).fold(1.0f64, |m, x| m.max(x.abs()));
    for m in 0..b.len() {
        let bound: f64 = (0..n)
            .map(|j| (w0[m] / w0[j]).min(w1[m] / w1[j]) * a[j].abs())
            .sum();
        if b[m].abs() > bound + 1e-12 * scale {
            return (false, Some(m));
        }
    }
    (true, None)
}

/// A finite dyadic decomposition `a = sum_nu u_nu` with the measured
/// fundamental-lemma constant.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub levels: Vec<i32>,
    pub parts: Vec<Vec<f64>>,
    /// `max_nu J(2^nu, u_nu) / K(2^nu, a)` over the nonzero parts.
    pub c_meas: f64,
}

impl Decomposition {
    pub fn recompose(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for part in &self.parts {
            for (o, p) in out.iter_mut().zip(part) {
                *o += p;
            }
        }
        out
    }

    /// The smoothed-kernel representation constant: the max over the t-grid
    /// of `sum_nu min(1, t/2^nu) J(2^nu, u_nu) / K(t, a)`.
    pub fn j_representation_constant(
        &self,
        couple: &Couple,
        a: &[f64],
        t_grid: &[f64],
    ) -> Result<f64, OrbitError> {
        let mut worst = 0.0f64;
        for &t in t_grid {
            let mut num = 0.0;
            for (lvl, part) in self.levels.iter().zip(&self.parts) {
                let x = 2.0f64.powi(*lvl);
                num += (t / x).min(1.0) * kfun::j(couple, part, x)?;
            }
            let den = kfun::k(couple, a, t)?;
            if den > 0.0 {
                worst = worst.max(num / den);
            }
        }
        Ok(worst)
    }
}

/// Builds the dyadic fundamental-lemma decomposition: near-optimal splits
/// at `t = 2^nu`, telescoped so the parts sum to `a` exactly, extreme levels
/// absorbing the tails. The level range defaults to the window where
/// `K(2^nu, a)` has left most of its rise, controlled by `eps`.
pub fn fundamental_decomposition(
    couple: &Couple,
    a: &[f64],
    eps: f64,
    levels: Option<(i32, i32)>,
) -> Result<Decomposition, OrbitError> {
    couple.check_element(a)?;
    if a.iter().all(|&x| x == 0.0) {
        return Err(OrbitError::ZeroElement);
    }
    if !(eps > 0.0) {
        return Err(OrbitError::NonpositiveEps(eps));
    }
    let (lo, hi) = match levels {
        Some((lo, hi)) if lo <= hi => (lo, hi),
        Some((lo, hi)) => (hi, lo),
        None => auto_range(couple, a, eps)?,
    };
    // Every finite-dimensional element is regular: K(t, a) = O(max(1, t)).
    let k_lo = kfun::k(couple, a, 2.0f64.powi(lo))?;
    debug_assert!(k_lo <= 2.0f64.powi(lo) * couple.side_norm(Side::One, a) * (1.0 + 1e-9));

    let n = couple.len();
    let mut a0_prev = vec![0.0; n];
    let mut levels_out = Vec::new();
    let mut parts = Vec::new();
    for nu in lo..=hi {
        let t = 2.0f64.powi(nu);
        let a0 = if nu == hi {
            a.to_vec()
        } else {
            kfun::k_functional(couple, a, t, Exponent::Finite(1.0), 1e-10)?
                .split
                .a0
        };
        let part: Vec<f64> = a0.iter().zip(&a0_prev).map(|(x, y)| x - y).collect();
        levels_out.push(nu);
        parts.push(part);
        a0_prev = a0;
    }
    let scale = couple.side_norm(Side::Zero, a).max(1e-300);
    let mut c_meas = 0.0f64;
    for (lvl, part) in levels_out.iter().zip(&parts) {
        let t = 2.0f64.powi(*lvl);
        let jval = kfun::j(couple, part, t)?;
        if jval <= 1e-13 * scale {
            continue;
        }
        let kval = kfun::k(couple, a, t)?;
        if kval > 0.0 {
            c_meas = c_meas.max(jval / kval);
        }
    }
    Ok(Decomposition {
        levels: levels_out,
        parts,
        c_meas,
    })
}

fn auto_range(couple: &Couple, a: &[f64], eps: f64) -> Result<(i32, i32), OrbitError> {
    let k1 = kfun::k(couple, a, 1.0)?;
    let top = couple.side_norm(Side::Zero, a);
    let mut lo = 0i32;
    while lo > -60 {
        if kfun::k(couple, a, 2.0f64.powi(lo))? <= eps.min(0.5) * k1 {
            break;
        }
        lo -= 1;
    }
    let mut hi = 0i32;
    while hi < 60 {
        if kfun::k(couple, a, 2.0f64.powi(hi))? >= (1.0 - eps.min(0.5)) * top {
            break;
        }
        hi += 1;
    }
    Ok((lo, hi.max(lo)))
}

/// An upper estimate of the fundamental-lemma constant over the sample set:
/// for each sample the best measured constant over candidate decompositions
/// (the telescoped one and the one-level ones), then the max over samples.
/// Reported, never asserted against the theoretical bounds.
pub fn gamma_estimate(couple: &Couple, samples: &[Vec<f64>], eps: f64) -> Result<f64, OrbitError> {
    let mut worst: f64 = 0.0;
    for a in samples {
        if a.iter().all(|&x| x == 0.0) {
            continue;
        }
        let telescoped = fundamental_decomposition(couple, a, eps, None)?.c_meas;
        let mut single = f64::INFINITY;
        for nu in -20..=20 {
            let t = 2.0f64.powi(nu);
            let k = kfun::k(couple, a, t)?;
            if k > 0.0 {
                single = single.min(kfun::j(couple, a, t)? / k);
            }
        }
        worst = worst.max(telescoped.min(single));
    }
    Ok(worst)
}
