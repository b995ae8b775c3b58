//! Nested greedy sensor selection and exhaustive enumeration of binary designs.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::clock::{Clock, DEFAULT_CLOCK};
use crate::error::{Error, Result};
use crate::linalg::symmetrize;
use crate::model::{is_binary, Design, Kernels, Model};

/// Parameter dimension up to which [`UpdatePath::Auto`] keeps `C_post` densely.
pub const DENSE_PARAMETER_LIMIT: usize = 1000;

/// Largest number of designs [`brute_force_best`] will enumerate.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// How candidate gains are computed inside a greedy step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdatePath {
    /// [`UpdatePath::Parameter`] when `n <= DENSE_PARAMETER_LIMIT`, else
    /// [`UpdatePath::DataSpace`].
    #[default]
    Auto,
    /// Keep the `n x n` posterior covariance and apply rank-`d` downdates.
    Parameter,
    /// Keep `F C_post F^T` and `F C_post^2 F^T` (both `md x md`).
    DataSpace,
    /// Re-evaluate the objective from the kernels for every candidate.
    FullRecompute,
}

#[derive(Debug, Clone, Copy)]
pub struct GreedyOptions {
    pub path: UpdatePath,
    pub clock: Clock,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        Self {
            path: UpdatePath::Auto,
            clock: DEFAULT_CLOCK,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Parameter { cov: DMatrix<f64> },
    DataSpace { q: DMatrix<f64>, g: DMatrix<f64> },
    Recompute,
}

/// Posterior for a binary design, supporting exact single-sensor gains.
#[derive(Debug, Clone)]
pub struct PosteriorState<'a> {
    model: &'a Model,
    kernels: &'a Kernels,
    weights: Vec<f64>,
    objective: f64,
    repr: Repr,
}

impl<'a> PosteriorState<'a> {
    /// State for the empty design (the prior).
    pub fn prior(model: &'a Model, kernels: &'a Kernels, path: UpdatePath) -> Self {
        let repr = match resolve(path, model) {
            UpdatePath::Parameter => Repr::Parameter {
                cov: model.prior_cov().clone(),
            },
            UpdatePath::DataSpace => Repr::DataSpace {
                q: kernels.k.clone(),
                g: kernels.l.clone(),
            },
            _ => Repr::Recompute,
        };
        Self {
            model,
            kernels,
            weights: vec![0.0; model.m()],
            objective: kernels.prior_trace,
            repr,
        }
    }

    /// State for a binary design, built by activating its sensors in index order.
    pub fn from_design(
        model: &'a Model,
        kernels: &'a Kernels,
        w: &[f64],
        path: UpdatePath,
    ) -> Result<Self> {
        if w.len() != model.m() {
            return Err(Error::DimensionMismatch {
                what: "design",
                expected: model.m(),
                found: w.len(),
            });
        }
        if !is_binary(w) {
            return Err(Error::NotBinary);
        }
        let mut state = Self::prior(model, kernels, path);
        for (k, _) in w.iter().enumerate().filter(|(_, &v)| v == 1.0) {
            state.activate(k)?;
        }
        Ok(state)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_active(&self, k: usize) -> bool {
        self.weights[k] == 1.0
    }

    pub fn active_count(&self) -> usize {
        self.weights.iter().filter(|&&v| v == 1.0).count()
    }

    /// Running value of `J` at the current design.
    pub fn objective(&self) -> f64 {
        self.objective
    }

    /// Exact change `J(w + e_k) - J(w)` from activating sensor `k`:
    /// `-tr(C_post F_k^T (sigma^2 I + F_k C_post F_k^T)^-1 F_k C_post)`.
    pub fn incremental_gain(&self, k: usize) -> Result<f64> {
        self.check_inactive(k)?;
        let d = self.model.d();
        let noise_var = self.model.noise_var();
        match &self.repr {
            Repr::Parameter { cov } => {
                let a = self.model.sensor_block(k) * cov;
                let mut s = &a * self.model.sensor_block(k).transpose();
                add_to_diagonal(&mut s, noise_var);
                let aat = &a * a.transpose();
                Ok(-solve_spd(s, aat)?.trace())
            }
            Repr::DataSpace { q, g } => {
                let mut s = q.view((k * d, k * d), (d, d)).into_owned();
                add_to_diagonal(&mut s, noise_var);
                let gkk = g.view((k * d, k * d), (d, d)).into_owned();
                Ok(-solve_spd(s, gkk)?.trace())
            }
            Repr::Recompute => {
                let mut w = self.weights.clone();
                w[k] = 1.0;
                Ok(self.model.objective(self.kernels, &w)? - self.objective)
            }
        }
    }

    /// Activates sensor `k` and updates the posterior.
    pub fn activate(&mut self, k: usize) -> Result<()> {
        let gain = self.incremental_gain(k)?;
        let d = self.model.d();
        let noise_var = self.model.noise_var();
        match &mut self.repr {
            Repr::Parameter { cov } => {
                let a = self.model.sensor_block(k) * &*cov;
                let mut s = &a * self.model.sensor_block(k).transpose();
                add_to_diagonal(&mut s, noise_var);
                let x = solve_spd(s, a.clone())?;
                *cov -= a.transpose() * x;
                symmetrize(cov);
            }
            Repr::DataSpace { q, g } => {
                let mut s = q.view((k * d, k * d), (d, d)).into_owned();
                add_to_diagonal(&mut s, noise_var);
                let qk = q.columns(k * d, d).into_owned();
                let gk = g.columns(k * d, d).into_owned();
                let gkk = g.view((k * d, k * d), (d, d)).into_owned();
                // X = S^-1 Q[k, :]
                let x = solve_spd(s, qk.transpose())?;
                let gkx = &gk * &x;
                *g += x.transpose() * gkk * &x - &gkx - gkx.transpose();
                *q -= &qk * &x;
                symmetrize(q);
                symmetrize(g);
            }
            Repr::Recompute => {}
        }
        self.weights[k] = 1.0;
        self.objective += gain;
        Ok(())
    }

    /// Inactive sensor with the most negative gain, lowest index among ties, and
    /// the number of candidates evaluated.
    pub fn best_candidate(&self) -> Result<Option<(usize, f64, usize)>> {
        let candidates: Vec<usize> = (0..self.model.m()).filter(|&k| !self.is_active(k)).collect();
        let gains = self.gains(&candidates)?;
        let mut best: Option<(usize, f64)> = None;
        for (&k, &gain) in candidates.iter().zip(&gains) {
            match best {
                Some((_, b)) if gain >= b => {}
                _ => best = Some((k, gain)),
            }
        }
        Ok(best.map(|(k, gain)| (k, gain, candidates.len())))
    }

    #[cfg(feature = "rayon")]
    fn gains(&self, candidates: &[usize]) -> Result<Vec<f64>> {
        use rayon::prelude::*;
        candidates
            .par_iter()
            .map(|&k| self.incremental_gain(k))
            .collect()
    }

    #[cfg(not(feature = "rayon"))]
    fn gains(&self, candidates: &[usize]) -> Result<Vec<f64>> {
        candidates.iter().map(|&k| self.incremental_gain(k)).collect()
    }

    fn check_inactive(&self, k: usize) -> Result<()> {
        if k >= self.model.m() {
            return Err(Error::DimensionMismatch {
                what: "sensor index",
                expected: self.model.m(),
                found: k,
            });
        }
        if self.is_active(k) {
            return Err(Error::IndexActive(k));
        }
        Ok(())
    }
}

fn resolve(path: UpdatePath, model: &Model) -> UpdatePath {
    match path {
        UpdatePath::Auto if model.n() <= DENSE_PARAMETER_LIMIT => UpdatePath::Parameter,
        UpdatePath::Auto => UpdatePath::DataSpace,
        other => other,
    }
}

fn add_to_diagonal(a: &mut DMatrix<f64>, value: f64) {
    for i in 0..a.nrows() {
        a[(i, i)] += value;
    }
}

fn solve_spd(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = nalgebra::Cholesky::new(a).ok_or(Error::NonFiniteObjective)?;
    Ok(chol.solve(&b))
}

/// Result of a nested greedy sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTrace {
    /// `designs[i]` has exactly `i + 1` active sensors.
    pub designs: Vec<Design>,
    /// `objectives[i] = J(designs[i])`.
    pub objectives: Vec<f64>,
    /// Sensor added at each step.
    pub selections: Vec<usize>,
    /// Candidate gains evaluated over the sweep.
    pub evaluations: usize,
    pub wall_clock: f64,
}

impl SweepTrace {
    /// Design with `count` sensors, if the sweep reached it.
    pub fn design(&self, count: usize) -> Option<&Design> {
        count.checked_sub(1).and_then(|i| self.designs.get(i))
    }

    pub fn objective(&self, count: usize) -> Option<f64> {
        count.checked_sub(1).and_then(|i| self.objectives.get(i).copied())
    }

    pub fn max_count(&self) -> usize {
        self.designs.len()
    }
}

/// Greedy sweep from the empty design up to `m_max` sensors.
pub fn greedy_sweep(model: &Model, kernels: &Kernels, m_max: usize) -> Result<SweepTrace> {
    greedy_sweep_with(model, kernels, m_max, &GreedyOptions::default())
}

pub fn greedy_sweep_with(
    model: &Model,
    kernels: &Kernels,
    m_max: usize,
    opts: &GreedyOptions,
) -> Result<SweepTrace> {
    let m = model.m();
    if m_max == 0 || m_max > m {
        return Err(Error::InvalidBudget { budget: m_max, m });
    }
    let start = (opts.clock)();
    let mut state = PosteriorState::prior(model, kernels, opts.path);
    let mut trace = SweepTrace {
        designs: Vec::with_capacity(m_max),
        objectives: Vec::with_capacity(m_max),
        selections: Vec::with_capacity(m_max),
        evaluations: 0,
        wall_clock: 0.0,
    };
    for count in 1..=m_max {
        let (k, _, evaluated) = state
            .best_candidate()?
            .expect("inactive sensors remain while count <= m");
        trace.evaluations += evaluated;
        state.activate(k)?;
        let w = state.weights().to_vec();
        trace.objectives.push(model.objective(kernels, &w)?);
        trace.designs.push(Design::new(w, count)?);
        trace.selections.push(k);
    }
    trace.wall_clock = (opts.clock)() - start;
    Ok(trace)
}

/// Outcome of [`greedy_fill_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct Fill {
    pub design: Design,
    /// Sensors added, in order.
    pub added: Vec<usize>,
    pub evaluations: usize,
}

/// Greedy steps from the binary design `w_init` until it has `target_count` ones.
pub fn greedy_fill(
    model: &Model,
    kernels: &Kernels,
    w_init: &[f64],
    target_count: usize,
) -> Result<Design> {
    greedy_fill_with(model, kernels, w_init, target_count, UpdatePath::Auto).map(|f| f.design)
}

pub fn greedy_fill_with(
    model: &Model,
    kernels: &Kernels,
    w_init: &[f64],
    target_count: usize,
    path: UpdatePath,
) -> Result<Fill> {
    let m = model.m();
    if w_init.len() != m {
        return Err(Error::DimensionMismatch {
            what: "design",
            expected: m,
            found: w_init.len(),
        });
    }
    if !is_binary(w_init) {
        return Err(Error::NotBinary);
    }
    let initial = w_init.iter().filter(|&&v| v == 1.0).count();
    if target_count == 0 || target_count > m || initial > target_count {
        return Err(Error::InvalidBudget {
            budget: target_count,
            m,
        });
    }
    let mut state = PosteriorState::from_design(model, kernels, w_init, path)?;
    let mut added = Vec::new();
    let mut evaluations = 0;
    while state.active_count() < target_count {
        let (k, _, evaluated) = state
            .best_candidate()?
            .expect("inactive sensors remain below target");
        evaluations += evaluated;
        state.activate(k)?;
        added.push(k);
    }
    Ok(Fill {
        design: Design::new(state.weights().to_vec(), target_count)?,
        added,
        evaluations,
    })
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Exhaustive minimizer of `J` over binary designs with exactly `budget` ones.
///
/// Subsets are visited in lexicographic order of their sorted index lists and
/// only a strictly smaller objective replaces the incumbent, so ties resolve to the
/// lexicographically first index set.
pub fn brute_force_best(model: &Model, kernels: &Kernels, budget: usize) -> Result<(Design, f64)> {
    let m = model.m();
    if budget == 0 || budget > m {
        return Err(Error::InvalidBudget { budget, m });
    }
    let count = binomial(m, budget).unwrap_or(u128::MAX);
    if count > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            count,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut subset: Vec<usize> = (0..budget).collect();
    let mut w = vec![0.0; m];
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        w.iter_mut().for_each(|v| *v = 0.0);
        for &k in &subset {
            w[k] = 1.0;
        }
        let value = model.objective(kernels, &w)?;
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((subset.clone(), value));
        }
        // next combination in lexicographic order
        let Some(i) = (0..budget).rev().find(|&i| subset[i] < m - budget + i) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..budget {
            subset[j] = subset[j - 1] + 1;
        }
    }
    let (indices, value) = best.expect("at least one subset");
    Ok((Design::from_active(m, &indices)?, value))
}
