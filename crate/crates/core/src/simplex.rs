//! The capped simplex `{w in R^m : 0 <= w <= 1, sum(w) <= budget}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const BISECTION_SUM_TOL: f64 = 1e-12;
const BISECTION_MAX_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CappedSimplex {
    m: usize,
    budget: usize,
}

impl CappedSimplex {
    pub fn new(m: usize, budget: usize) -> Result<Self> {
        if budget == 0 || budget > m {
            return Err(Error::InvalidBudget { budget, m });
        }
        Ok(Self { m, budget })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn contains(&self, w: &[f64], tol: f64) -> Result<bool> {
        self.check(w)?;
        let in_box = w.iter().all(|&v| v >= -tol && v <= 1.0 + tol);
        Ok(in_box && w.iter().sum::<f64>() <= self.budget as f64 + tol)
    }

    /// Euclidean projection.
    ///
    /// Clips to the box; if the budget is then violated, finds `tau >= 0` with
    /// `sum_k clip(v_k - tau, 0, 1) = budget` by bisection on `[0, max(v)]` and
    /// returns `clip(v - tau, 0, 1)`.
    pub fn project(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check(v)?;
        let budget = self.budget as f64;
        let clipped: Vec<f64> = v.iter().map(|&x| x.clamp(0.0, 1.0)).collect();
        if clipped.iter().sum::<f64>() <= budget {
            return Ok(clipped);
        }
        let shifted_sum = |tau: f64| v.iter().map(|&x| (x - tau).clamp(0.0, 1.0)).sum::<f64>();
        let (mut lo, mut hi) = (0.0, v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        let mut tau = 0.5 * (lo + hi);
        for _ in 0..BISECTION_MAX_ITERS {
            tau = 0.5 * (lo + hi);
            let excess = shifted_sum(tau) - budget;
            if excess.abs() <= BISECTION_SUM_TOL {
                break;
            }
            if excess > 0.0 {
                lo = tau;
            } else {
                hi = tau;
            }
            if hi - lo <= f64::EPSILON * hi.abs() {
                // bracket collapsed; settle on the feasible end
                tau = hi;
                break;
            }
        }
        let tau = refine_threshold(v, tau, budget);
        Ok(v.iter().map(|&x| (x - tau).clamp(0.0, 1.0)).collect())
    }

    /// Vertex minimizing `<g, w>`: ones at the `min(budget, #{g_k < 0})` most
    /// negative entries, lowest index first among ties.
    pub fn linear_minimizer(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.check(g)?;
        let mut order: Vec<usize> = (0..self.m).filter(|&k| g[k] < 0.0).collect();
        order.sort_by(|&a, &b| g[a].total_cmp(&g[b]).then(a.cmp(&b)));
        let mut w = vec![0.0; self.m];
        for &k in order.iter().take(self.budget) {
            w[k] = 1.0;
        }
        Ok(w)
    }

    fn check(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.m {
            return Err(Error::DimensionMismatch {
                what: "simplex vector",
                expected: self.m,
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// Solves `sum_k clip(v_k - tau, 0, 1) = budget` exactly on the active set that the
/// bisection estimate `tau` identifies, and keeps the refined value only if it
/// reproduces that active set.
fn refine_threshold(v: &[f64], tau: f64, budget: f64) -> f64 {
    let (mut free_sum, mut free_count, mut saturated) = (0.0, 0usize, 0usize);
    for &x in v {
        let shifted = x - tau;
        if shifted >= 1.0 {
            saturated += 1;
        } else if shifted > 0.0 {
            free_sum += x;
            free_count += 1;
        }
    }
    if free_count == 0 {
        return tau;
    }
    let exact = (free_sum + saturated as f64 - budget) / free_count as f64;
    let consistent = exact >= 0.0
        && v.iter().all(|&x| {
            let before = x - tau;
            let after = x - exact;
            (before >= 1.0) == (after >= 1.0) && (before > 0.0) == (after > 0.0)
        });
    if consistent {
        exact
    } else {
        tau
    }
}
