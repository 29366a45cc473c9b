//! The level-interpolation operator from the orbit construction: a linear
//! map on samples of piecewise-linear functions that carries `a` to its
//! decreasing rearrangement by blending values across level crossings.
//!
//! Experimental: the discrete Hardy-Littlewood-Polya path is the normative
//! construction; this operator exists to exercise the rearrangement-by-
//! blending idea on sampled data. Rows are convex combinations, so the
//! sup-norm side is always a contraction; the weighted-side bound is
//! reported on test corpora, not asserted universally.

use crate::error::OrbitError;

#[derive(Debug, Clone)]
pub struct LevelInterpOperator {
    grid: Vec<f64>,
    matrix: Vec<f64>,
}

impl LevelInterpOperator {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.grid.len() + j]
    }

    pub fn apply(&self, samples: &[f64]) -> Result<Vec<f64>, OrbitError> {
        let n = self.grid.len();
        if samples.len() != n {
            return Err(OrbitError::GridMismatch);
        }
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j) * samples[j]).sum())
            .collect())
    }

    /// Max over rows of the absolute row sum: 1 for a well-formed operator
    /// (rows are convex combinations).
    pub fn sup_norm_bound(&self) -> f64 {
        let n = self.grid.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// The sampled weighted-side ratio `sup |T f(x)|/x  /  sup |f(x)|/x`
    /// for one probe function.
    pub fn weighted_ratio(&self, samples: &[f64]) -> Result<f64, OrbitError> {
        let image = self.apply(samples)?;
        let norm = |v: &[f64]| -> f64 {
            v.iter()
                .zip(&self.grid)
                .map(|(y, x)| y.abs() / x)
                .fold(0.0, f64::max)
        };
        let denom = norm(samples);
        if denom == 0.0 {
            return Ok(0.0);
        }
        Ok(norm(&image) / denom)
    }
}

/// Builds the operator for the nonnegative piecewise-linear function with
/// the given samples on a strictly increasing positive grid. Applying it to
/// the samples of `a` itself yields the decreasing rearrangement of the
/// samples; a nonincreasing `a` gives the identity.
pub fn level_interp_operator(grid: &[f64], a: &[f64]) -> Result<LevelInterpOperator, OrbitError> {
    let n = grid.len();
    if n == 0 || a.len() != n {
        return Err(OrbitError::GridMismatch);
    }
    let mut prev = 0.0;
    for &x in grid {
        if !(x > prev) || !x.is_finite() {
            return Err(OrbitError::GridMismatch);
        }
        prev = x;
    }
    for (index, &v) in a.iter().enumerate() {
        if v < 0.0 || !v.is_finite() {
            return Err(OrbitError::NegativeSample { index, value: v });
        }
    }
    let mut sorted: Vec<f64> = a.to_vec();
    sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let scale = sorted.first().copied().unwrap_or(0.0).max(1.0);
    let eps = 1e-12 * scale;

    let mut matrix = vec![0.0; n * n];
    for i in 0..n {
        let target = sorted[i];
        if (a[i] - target).abs() <= eps {
            matrix[i * n + i] = 1.0;
            continue;
        }
        // All positions where the piecewise-linear function passes the level.
        let crossings = level_crossings(grid, a, target, eps);
        let before = crossings
            .iter()
            .rev()
            .find(|c| c.position <= grid[i] + eps)
            .cloned();
        let after = crossings
            .iter()
            .find(|c| c.position >= grid[i] - eps)
            .cloned();
        match (before, after) {
            (Some(lo), Some(hi)) if hi.position > lo.position + eps => {
                let lambda = (grid[i] - lo.position) / (hi.position - lo.position);
                add_row(&mut matrix, i, n, &lo, 1.0 - lambda);
                add_row(&mut matrix, i, n, &hi, lambda);
            }
            (Some(single), _) | (_, Some(single)) => {
                add_row(&mut matrix, i, n, &single, 1.0);
            }
            (None, None) => unreachable!("the level equals a sample value"),
        }
    }
    Ok(LevelInterpOperator {
        grid: grid.to_vec(),
        matrix,
    })
}

#[derive(Debug, Clone)]
struct Crossing {
    position: f64,
    left_index: usize,
    theta: f64, // interpolation weight toward left_index + 1
}

fn add_row(matrix: &mut [f64], row: usize, n: usize, c: &Crossing, weight: f64) {
    matrix[row * n + c.left_index] += weight * (1.0 - c.theta);
    if c.theta > 0.0 {
        matrix[row * n + c.left_index + 1] += weight * c.theta;
    }
}

fn level_crossings(grid: &[f64], a: &[f64], level: f64, eps: f64) -> Vec<Crossing> {
    let n = grid.len();
    let mut out = Vec::new();
    for j in 0..n {
        if (a[j] - level).abs() <= eps {
            out.push(Crossing {
                position: grid[j],
                left_index: j,
                theta: 0.0,
            });
        }
        if j + 1 < n {
            let (lo, hi) = (a[j].min(a[j + 1]), a[j].max(a[j + 1]));
            if lo + eps < level && level < hi - eps {
                let theta = (level - a[j]) / (a[j + 1] - a[j]);
                out.push(Crossing {
                    position: grid[j] + theta * (grid[j + 1] - grid[j]),
                    left_index: j,
                    theta,
                });
            }
        }
    }
    out.sort_by(|x, y| x.position.partial_cmp(&y.position).unwrap());
    out
}
