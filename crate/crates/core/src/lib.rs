//! A-optimal sensor placement for Bayesian linear-Gaussian inverse problems.
//!
//! The crate is `no_std` and needs only `alloc`. It provides:
//!
//! - [`model`]: the inverse problem, the A-optimal objective `J(w) = tr(C_post(w))`,
//!   its gradient and Hessian actions evaluated in data space, and the posterior mean.
//! - [`simplex`]: the capped simplex `{0 <= w <= 1, sum(w) <= m0}`.
//! - [`relaxed`]: projected-gradient solver for the relaxed problem and the
//!   sorted-gradient optimality certificate.
//! - [`greedy`]: the nested greedy sweep with rank-d posterior updates, and
//!   exhaustive enumeration for small instances.
//! - [`informed`]: the greedy sweep that prunes indices which are redundant at the
//!   relaxed optimum and refills greedily, plus sweep comparison statistics.
//!
//! Enable the `std` feature for wall-clock timing and `rayon` for parallel
//! candidate evaluation in greedy steps.
#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

mod clock;
mod error;
mod linalg;

pub mod greedy;
pub mod informed;
pub mod model;
pub mod relaxed;
pub mod simplex;

pub use clock::{null_clock, Clock};
#[cfg(feature = "std")]
pub use clock::std_clock;
pub use error::{Error, Result};
pub use greedy::{
    brute_force_best, greedy_fill, greedy_sweep, GreedyOptions, PosteriorState, SweepTrace,
    UpdatePath,
};
pub use informed::{
    compare_sweeps, informed_sweep, ComparisonReport, ComparisonRow, ComparisonSummary,
    InformedOptions, InformedTrace,
};
pub use model::{Design, Evaluation, Kernels, Model};
pub use relaxed::{
    certify, classify_redundant, solve_relaxed, Certificate, IndexClass, RelaxedSolution,
    SolverOptions, Violation,
};
pub use simplex::CappedSimplex;
