//! Greedy sweep informed by the relaxed global optimum.
//!
//! Starting from the plain greedy design at `m0_start`, each later budget `m0`
//! solves the relaxed problem, drops every sensor of the current design that the
//! certificate labels redundant, and greedily refills to `m0` sensors.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::greedy::{greedy_fill_with, greedy_sweep_with, GreedyOptions, SweepTrace};
use crate::model::{Design, Kernels, Model};
use crate::relaxed::{certify, classify_redundant, solve_relaxed, SolverOptions};

#[derive(Debug, Clone)]
pub struct InformedOptions {
    pub relaxed: SolverOptions,
    /// Solve and prune on every `prune_every`-th budget, counted from `m0_start`.
    pub prune_every: usize,
    /// Start each relaxed solve from the previous relaxed optimum.
    pub warm_start: bool,
    pub greedy: GreedyOptions,
}

impl Default for InformedOptions {
    fn default() -> Self {
        Self {
            relaxed: SolverOptions::default(),
            prune_every: 1,
            warm_start: true,
            greedy: GreedyOptions::default(),
        }
    }
}

/// Default first budget of an informed sweep.
pub const DEFAULT_M0_START: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct InformedTrace {
    /// Budgets `m0_start..=m_max`; all other vectors are indexed alongside.
    pub m0_values: Vec<usize>,
    pub designs: Vec<Design>,
    pub objectives: Vec<f64>,
    /// `J(w*)` at each budget; `None` where no relaxed solve ran.
    pub relaxed_objectives: Vec<Option<f64>>,
    pub relaxed_converged: Vec<Option<bool>>,
    /// Sensors removed from the design before refilling.
    pub pruned_counts: Vec<usize>,
    /// Refilled sensors that were themselves labelled redundant at that budget.
    pub reintroduced_counts: Vec<usize>,
    pub relaxed_seconds: f64,
    pub total_seconds: f64,
}

impl InformedTrace {
    pub fn position(&self, m0: usize) -> Option<usize> {
        self.m0_values.iter().position(|&v| v == m0)
    }

    pub fn design(&self, m0: usize) -> Option<&Design> {
        self.position(m0).map(|i| &self.designs[i])
    }
}

pub fn informed_sweep(
    model: &Model,
    kernels: &Kernels,
    m0_start: usize,
    m_max: usize,
    opts: &InformedOptions,
) -> Result<InformedTrace> {
    let m = model.m();
    if m0_start == 0 || m0_start > m_max || m_max > m {
        return Err(Error::InvalidBudget {
            budget: if m0_start == 0 { 0 } else { m_max },
            m,
        });
    }
    let clock = opts.greedy.clock;
    let prune_every = opts.prune_every.max(1);
    let started = clock();

    let initial = greedy_sweep_with(model, kernels, m0_start, &opts.greedy)?;
    let mut design = initial
        .design(m0_start)
        .expect("sweep reaches m0_start")
        .weights()
        .to_vec();

    let capacity = m_max - m0_start + 1;
    let mut trace = InformedTrace {
        m0_values: Vec::with_capacity(capacity),
        designs: Vec::with_capacity(capacity),
        objectives: Vec::with_capacity(capacity),
        relaxed_objectives: Vec::with_capacity(capacity),
        relaxed_converged: Vec::with_capacity(capacity),
        pruned_counts: Vec::with_capacity(capacity),
        reintroduced_counts: Vec::with_capacity(capacity),
        relaxed_seconds: 0.0,
        total_seconds: 0.0,
    };
    let mut previous_optimum: Option<Vec<f64>> = None;

    for m0 in m0_start..=m_max {
        let periodic = (m0 - m0_start).is_multiple_of(prune_every);
        let mut relaxed_value = None;
        let mut converged = None;
        let mut redundant = Vec::new();

        if periodic {
            let mut solver = opts.relaxed.clone();
            if opts.warm_start && solver.initial.is_none() {
                solver.initial = previous_optimum.clone();
            }
            let t0 = clock();
            let solution = solve_relaxed(model, kernels, m0, &solver)?;
            trace.relaxed_seconds += clock() - t0;

            let certificate = certify(model, kernels, solution.w_star.weights(), m0, None)?;
            match classify_redundant(&certificate) {
                Ok(indices) => redundant = indices,
                Err(Error::NotCertified) => {}
                Err(e) => return Err(e),
            }
            relaxed_value = Some(solution.objective_value);
            converged = Some(solution.converged);
            previous_optimum = Some(solution.w_star.into_weights());
        }

        let mut pruned = 0;
        let mut reintroduced = 0;
        if m0 > m0_start {
            for &k in &redundant {
                if design[k] == 1.0 {
                    design[k] = 0.0;
                    pruned += 1;
                }
            }
            let fill = greedy_fill_with(model, kernels, &design, m0, opts.greedy.path)?;
            reintroduced = fill.added.iter().filter(|k| redundant.contains(k)).count();
            design = fill.design.into_weights();
        }

        trace.m0_values.push(m0);
        trace.objectives.push(model.objective(kernels, &design)?);
        trace.designs.push(Design::new(design.clone(), m0)?);
        trace.relaxed_objectives.push(relaxed_value);
        trace.relaxed_converged.push(converged);
        trace.pruned_counts.push(pruned);
        trace.reintroduced_counts.push(reintroduced);
    }
    trace.total_seconds = clock() - started;
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub m0: usize,
    pub j_greedy: f64,
    pub j_informed: f64,
    pub j_relaxed: Option<f64>,
    /// `(j_greedy - j_informed) / j_greedy`.
    pub rel_improvement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSummary {
    pub mean_improvement: f64,
    pub best_improvement: f64,
    /// Fraction of budgets where the informed design is no worse than greedy.
    pub fraction_not_worse: f64,
    pub greedy_seconds: f64,
    pub informed_relaxed_seconds: f64,
    pub informed_total_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub summary: ComparisonSummary,
}

/// Per-budget comparison over the budgets both traces cover.
pub fn compare_sweeps(greedy: &SweepTrace, informed: &InformedTrace) -> Result<ComparisonReport> {
    let rows: Vec<ComparisonRow> = informed
        .m0_values
        .iter()
        .enumerate()
        .filter_map(|(i, &m0)| {
            let j_greedy = greedy.objective(m0)?;
            let j_informed = informed.objectives[i];
            Some(ComparisonRow {
                m0,
                j_greedy,
                j_informed,
                j_relaxed: informed.relaxed_objectives[i],
                rel_improvement: (j_greedy - j_informed) / j_greedy,
            })
        })
        .collect();
    if rows.is_empty() {
        return Err(Error::RangeMismatch);
    }
    let count = rows.len() as f64;
    let mean_improvement = rows.iter().map(|r| r.rel_improvement).sum::<f64>() / count;
    let best_improvement = rows
        .iter()
        .map(|r| r.rel_improvement)
        .fold(f64::NEG_INFINITY, f64::max);
    let not_worse = rows.iter().filter(|r| r.j_informed <= r.j_greedy).count() as f64;
    Ok(ComparisonReport {
        summary: ComparisonSummary {
            mean_improvement,
            best_improvement,
            fraction_not_worse: not_worse / count,
            greedy_seconds: greedy.wall_clock,
            informed_relaxed_seconds: informed.relaxed_seconds,
            informed_total_seconds: informed.total_seconds,
        },
        rows,
    })
}
