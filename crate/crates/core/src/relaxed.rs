//! Global optimum of the relaxed design problem and its first-order certificate.
//!
//! The relaxed problem minimizes `J` over the capped simplex. Since `J` is convex
//! and strictly decreasing in every weight, a feasible `w` is optimal exactly when,
//! with the gradient sorted ascending as `g_(1) <= ... <= g_(m)`:
//!
//! - `w_k = 1` wherever `g_k < g_(m0+1)` (dominant indices),
//! - `w_k = 0` wherever `g_k > g_(m0)` (redundant indices),
//! - `sum(w) = m0`.
//!
//! The strict comparisons are evaluated with a band of width `tol_grad`; indices
//! inside the band are intermediate and never produce a violation.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Design, Kernels, Model};
use crate::simplex::CappedSimplex;

/// Entries within this distance of 0 or 1 count as exactly 0 or 1.
pub const WEIGHT_TOL: f64 = 1e-6;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;
const MAX_STEP: f64 = 1e20;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub max_iters: usize,
    /// Stop when `||w - project(w - grad J(w))||_2 <= tol_pg`.
    pub tol_pg: f64,
    /// Starting point; projected onto the feasible set. Defaults to `(m0/m) * 1`.
    pub initial: Option<Vec<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            tol_pg: 1e-8,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedSolution {
    pub w_star: Design,
    pub objective_value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Projected-gradient norm at `w_star`.
    pub final_step_criterion: f64,
    /// Objective at every accepted iterate, starting with the initial point.
    pub objective_history: Vec<f64>,
}

/// Projected gradient with Armijo backtracking along the projection arc. The
/// trial step starts from the Barzilai-Borwein length `s^T s / s^T y` after the
/// first iteration and is halved until sufficient decrease holds.
pub fn solve_relaxed(
    model: &Model,
    kernels: &Kernels,
    budget: usize,
    opts: &SolverOptions,
) -> Result<RelaxedSolution> {
    let m = model.m();
    let set = CappedSimplex::new(m, budget)?;
    let start = match &opts.initial {
        Some(w0) => w0.clone(),
        None => vec![budget as f64 / m as f64; m],
    };
    let mut w = set.project(&start)?;
    let mut eval = model.evaluate(kernels, &w)?;
    let mut history = vec![eval.objective];
    let mut pg_norm = projected_gradient_norm(&set, &w, &eval.gradient)?;
    let mut step = 1.0 / inf_norm(&eval.gradient).max(f64::MIN_POSITIVE);
    let mut iterations = 0;

    while pg_norm > opts.tol_pg && iterations < opts.max_iters {
        let mut trial_step = step;
        let accepted = loop {
            let trial: Vec<f64> = w
                .iter()
                .zip(&eval.gradient)
                .map(|(wi, gi)| wi - trial_step * gi)
                .collect();
            let trial = set.project(&trial)?;
            let decrease = dot_diff(&eval.gradient, &trial, &w);
            let trial_eval = model.evaluate(kernels, &trial)?;
            // Convexity gives J(trial) <= J(w) + grad J(trial)^T (trial - w), which
            // stays resolvable after objective differences sink below roundoff.
            let upper_bound = dot_diff(&trial_eval.gradient, &trial, &w);
            if trial_eval.objective <= eval.objective + ARMIJO * decrease
                || (decrease < 0.0 && upper_bound <= ARMIJO * decrease)
            {
                break Some((trial, trial_eval));
            }
            trial_step *= 0.5;
            if trial_step < MIN_STEP {
                break None;
            }
        };
        let Some((next, next_eval)) = accepted else {
            // no certified decrease left along the projection arc
            break;
        };
        let (mut ss, mut sy) = (0.0, 0.0);
        for k in 0..m {
            let s = next[k] - w[k];
            let y = next_eval.gradient[k] - eval.gradient[k];
            ss += s * s;
            sy += s * y;
        }
        if ss == 0.0 {
            break;
        }
        step = if sy > 0.0 {
            (ss / sy).clamp(MIN_STEP, MAX_STEP)
        } else {
            1.0 / inf_norm(&next_eval.gradient).max(f64::MIN_POSITIVE)
        };
        iterations += 1;
        w = next;
        eval = next_eval;
        history.push(eval.objective);
        pg_norm = projected_gradient_norm(&set, &w, &eval.gradient)?;
    }

    if !eval.objective.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    Ok(RelaxedSolution {
        w_star: Design::new(w, budget)?,
        objective_value: eval.objective,
        iterations,
        converged: pg_norm <= opts.tol_pg,
        final_step_criterion: pg_norm,
        objective_history: history,
    })
}

/// `||w - project(w - g)||_2`.
pub fn projected_gradient_norm(set: &CappedSimplex, w: &[f64], g: &[f64]) -> Result<f64> {
    let shifted: Vec<f64> = w.iter().zip(g).map(|(a, b)| a - b).collect();
    let p = set.project(&shifted)?;
    Ok(libm::sqrt(
        w.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
    ))
}

/// `g^T (a - b)`.
fn dot_diff(g: &[f64], a: &[f64], b: &[f64]) -> f64 {
    g.iter().zip(a.iter().zip(b)).map(|(g, (a, b))| g * (a - b)).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexClass {
    /// Gradient strictly below the upper threshold; must carry weight 1.
    Dominant,
    /// Gradient strictly above the lower threshold; must carry weight 0.
    Redundant,
    Intermediate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// A dominant index whose weight is not 1.
    DominantNotOne { index: usize, weight: f64 },
    /// A redundant index whose weight is not 0.
    RedundantNotZero { index: usize, weight: f64 },
    /// The weights do not exhaust the budget.
    BudgetSlack { sum: f64, budget: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub gradient: Vec<f64>,
    /// Gradient sorted ascending.
    pub sorted_gradient: Vec<f64>,
    /// `permutation[i]` is the original index of `sorted_gradient[i]`.
    pub permutation: Vec<usize>,
    /// Sorted gradient at (1-based) position `m0`.
    pub threshold_low: f64,
    /// Sorted gradient at position `m0 + 1`; `None` when `m0 = m`.
    pub threshold_high: Option<f64>,
    pub tol_grad: f64,
    pub classification: Vec<IndexClass>,
    pub is_optimal: bool,
    pub violations: Vec<Violation>,
    pub budget: usize,
    /// `||w - project(w - grad J(w))||_2` at the certified design.
    pub projected_gradient_norm: f64,
}

impl Certificate {
    pub fn count(&self, class: IndexClass) -> usize {
        self.classification.iter().filter(|&&c| c == class).count()
    }
}

/// Checks the sorted-gradient optimality conditions at `w`.
///
/// `tol_grad` defaults to `1e-6 * ||grad J(w)||_inf`.
pub fn certify(
    model: &Model,
    kernels: &Kernels,
    w: &[f64],
    budget: usize,
    tol_grad: Option<f64>,
) -> Result<Certificate> {
    let m = model.m();
    let set = CappedSimplex::new(m, budget)?;
    if w.len() != m {
        return Err(Error::DimensionMismatch {
            what: "design",
            expected: m,
            found: w.len(),
        });
    }
    let gradient = model.gradient(kernels, w)?;
    let tol_grad = tol_grad.unwrap_or_else(|| 1e-6 * inf_norm(&gradient));

    let mut permutation: Vec<usize> = (0..m).collect();
    permutation.sort_by(|&a, &b| gradient[a].total_cmp(&gradient[b]).then(a.cmp(&b)));
    let sorted_gradient: Vec<f64> = permutation.iter().map(|&k| gradient[k]).collect();
    let threshold_low = sorted_gradient[budget - 1];
    let threshold_high = sorted_gradient.get(budget).copied();

    let mut classification = Vec::with_capacity(m);
    let mut violations = Vec::new();
    for (index, (&g, &weight)) in gradient.iter().zip(w).enumerate() {
        let dominant = match threshold_high {
            Some(high) => g < high - tol_grad,
            None => true,
        };
        let redundant = g > threshold_low + tol_grad;
        let class = if dominant {
            IndexClass::Dominant
        } else if redundant {
            IndexClass::Redundant
        } else {
            IndexClass::Intermediate
        };
        if dominant && (weight - 1.0).abs() > WEIGHT_TOL {
            violations.push(Violation::DominantNotOne { index, weight });
        }
        if redundant && weight.abs() > WEIGHT_TOL {
            violations.push(Violation::RedundantNotZero { index, weight });
        }
        classification.push(class);
    }
    let sum: f64 = w.iter().sum();
    if (sum - budget as f64).abs() > WEIGHT_TOL {
        violations.push(Violation::BudgetSlack { sum, budget });
    }

    Ok(Certificate {
        projected_gradient_norm: projected_gradient_norm(&set, w, &gradient)?,
        gradient,
        sorted_gradient,
        permutation,
        threshold_low,
        threshold_high,
        tol_grad,
        classification,
        is_optimal: violations.is_empty(),
        violations,
        budget,
    })
}

/// Projected-gradient norm below which an uncertified design still counts as a
/// converged relaxed solution.
pub const CONVERGED_PG_TOL: f64 = 1e-8;

/// Indices labelled redundant, in increasing order.
///
/// Fails with [`Error::NotCertified`] unless the certificate is optimal or its
/// design is a converged relaxed solution.
pub fn classify_redundant(certificate: &Certificate) -> Result<Vec<usize>> {
    if !certificate.is_optimal && certificate.projected_gradient_norm > CONVERGED_PG_TOL {
        return Err(Error::NotCertified);
    }
    Ok(certificate
        .classification
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == IndexClass::Redundant)
        .map(|(k, _)| k)
        .collect())
}
