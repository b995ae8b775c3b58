//! End-to-end acceptance checks, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use aoed::problems::{four_bump_source, synthetic_data};
use aoed::{generate, reference_problem, GridParams, ProblemSpec};
use aoed_core::greedy::greedy_sweep_with;
use aoed_core::{
    certify, compare_sweeps, informed_sweep, null_clock, solve_relaxed, CappedSimplex,
    GreedyOptions, IndexClass, InformedOptions, Kernels, Model, SolverOptions, UpdatePath,
};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn main() -> ExitCode {
    let checks: [Check; 10] = [
        ("analytic relaxed optimum", analytic_optimum),
        ("relaxed lower bound", lower_bound),
        ("certificate soundness", certificate_soundness),
        ("derivative correctness", derivatives),
        ("kernel/dense equivalence", kernel_dense),
        ("greedy evaluation count", greedy_count),
        ("informed sweep structure", informed_structure),
        ("informed departs from greedy", informed_departs),
        ("posterior-mean reconstruction", reconstruction),
        ("projection correctness", projection),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {:>2} {name} ({secs:.2} s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2} {name} ({secs:.2} s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let elapsed = start.elapsed();
    ensure!(elapsed < limit, "took {elapsed:?}, limit {limit:?}");
    Ok(())
}

fn precomputed(spec: &ProblemSpec) -> (Model, Kernels) {
    let model = generate(spec).expect("valid problem spec");
    let kernels = model.precompute();
    (model, kernels)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn analytic_optimum() -> Outcome {
    let start = Instant::now();
    let (model, kernels) = precomputed(&ProblemSpec::diagonal(vec![4.0, 1.0]));
    let sol = solve_relaxed(&model, &kernels, 1, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let w = sol.w_star.weights();
    // Stationarity of 4/(1+4a) + 1/(2-a) over a + b = 1 gives a = 7/8.
    let dist = (w[0] - 0.875).abs().max((w[1] - 0.125).abs());
    ensure!(dist < 1e-5, "w* = {w:?}");
    ensure!((sol.objective_value - 16.0 / 9.0).abs() < 1e-5, "J = {}", sol.objective_value);
    let cert = certify(&model, &kernels, w, 1, None).map_err(|e| e.to_string())?;
    ensure!(cert.is_optimal, "violations {:?}", cert.violations);
    ensure!(
        cert.classification == [IndexClass::Intermediate; 2],
        "classes {:?}",
        cert.classification
    );
    within(start, Duration::from_secs(1))?;
    Ok(format!("w* = ({:.6}, {:.6}), J = {:.6}", w[0], w[1], sol.objective_value))
}

fn binary_designs(m: usize, count: usize) -> Vec<Vec<f64>> {
    (0u32..1 << m)
        .filter(|mask| mask.count_ones() as usize == count)
        .map(|mask| (0..m).map(|k| f64::from((mask >> k) & 1)).collect())
        .collect()
}

fn gaussian_models() -> Vec<(Model, Kernels)> {
    (0..20)
        .map(|seed| precomputed(&ProblemSpec::random_gaussian(10, 1, 15, seed)))
        .collect()
}

fn lower_bound() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut worst_gap = f64::INFINITY;
    for (i, (model, kernels)) in gaussian_models().iter().enumerate() {
        for m0 in 2..=4 {
            let sol = solve_relaxed(model, kernels, m0, &SolverOptions::default()).map_err(|e| e.to_string())?;
            for b in binary_designs(10, m0) {
                let jb = model.objective(kernels, &b).map_err(|e| e.to_string())?;
                ensure!(
                    sol.objective_value <= jb + 1e-8 * jb,
                    "model {i}, m0 {m0}: J(w*) = {} > J(b) = {jb}",
                    sol.objective_value
                );
                worst_gap = worst_gap.min((jb - sol.objective_value) / jb);
                checked += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{checked} binary designs, smallest relative gap {worst_gap:.3e}"))
}

fn certificate_soundness() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let (mut solves, mut rejected, mut near_optimal) = (0, 0, 0);
    for (i, (model, kernels)) in gaussian_models().iter().enumerate() {
        for m0 in 2..=4 {
            let sol = solve_relaxed(model, kernels, m0, &SolverOptions::default()).map_err(|e| e.to_string())?;
            if !sol.converged {
                continue;
            }
            solves += 1;
            let cert = certify(model, kernels, sol.w_star.weights(), m0, None).map_err(|e| e.to_string())?;
            ensure!(cert.is_optimal, "model {i}, m0 {m0}: {:?}", cert.violations);

            let set = CappedSimplex::new(10, m0).expect("valid budget");
            for _ in 0..100 {
                let raw: Vec<f64> = (0..10).map(|_| rng.random_range(-0.5..1.5)).collect();
                let w = set.project(&raw).expect("matching length");
                let jw = model.objective(kernels, &w).map_err(|e| e.to_string())?;
                let cert = certify(model, kernels, &w, m0, None).map_err(|e| e.to_string())?;
                if jw > sol.objective_value * (1.0 + 1e-4) {
                    ensure!(!cert.is_optimal, "model {i}, m0 {m0}: certified {w:?} with J = {jw}");
                    rejected += 1;
                } else {
                    near_optimal += 1;
                }
            }
        }
    }
    ensure!(solves == 60, "only {solves} of 60 solves converged");
    Ok(format!(
        "{solves} optima certified, {rejected} suboptimal designs rejected, {near_optimal} within 1e-4"
    ))
}

fn derivative_models() -> Vec<(Model, Kernels)> {
    let mut out: Vec<_> = (0..6)
        .map(|seed| precomputed(&ProblemSpec::random_gaussian(8, 1 + seed as usize % 3, 12, 100 + seed)))
        .collect();
    for seed in 0..4 {
        out.push(precomputed(&ProblemSpec::grid_source(GridParams::new(12, 2, 25), seed)));
    }
    out
}

fn derivatives() -> Outcome {
    let h = 1e-5;
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let (mut worst_grad, mut worst_hess, mut min_quad) = (0.0f64, 0.0f64, f64::INFINITY);
    for (i, (model, kernels)) in derivative_models().iter().enumerate() {
        let m = model.m();
        let set = CappedSimplex::new(m, m / 2).expect("valid budget");
        for _ in 0..20 {
            // interior points keep the central stencil away from w = 0
            let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..0.95)).collect();
            let scale = (set.budget() as f64 / raw.iter().sum::<f64>()).min(1.0);
            let w: Vec<f64> = raw.iter().map(|v| (v * scale).max(0.05)).collect();
            let grad = model.gradient(kernels, &w).map_err(|e| e.to_string())?;
            let objective = |x: &[f64]| model.objective(kernels, x).expect("valid design");
            for k in 0..m {
                let (mut up, mut down) = (w.clone(), w.clone());
                up[k] += h;
                down[k] -= h;
                let fd = (objective(&up) - objective(&down)) / (2.0 * h);
                let err = rel(grad[k], fd);
                ensure!(err < 1e-5, "model {i}, index {k}: gradient {} vs {fd}", grad[k]);
                worst_grad = worst_grad.max(err);
            }

            let v: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let hv = DVector::from_vec(model.hessian_apply(kernels, &w, &v).map_err(|e| e.to_string())?);
            let shifted = |t: f64| -> DVector<f64> {
                let x: Vec<f64> = w.iter().zip(&v).map(|(a, b)| a + t * b).collect();
                DVector::from_vec(model.gradient(kernels, &x).expect("valid design"))
            };
            let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
            let err = (&hv - &fd).norm() / fd.norm();
            ensure!(err < 1e-4, "model {i}: Hessian product error {err:.3e}");
            worst_hess = worst_hess.max(err);
            let quad = DVector::from_vec(v).dot(&hv);
            ensure!(quad >= -1e-12, "model {i}: quadratic form {quad:e}");
            min_quad = min_quad.min(quad);
        }
    }
    Ok(format!(
        "max gradient error {worst_grad:.2e}, max Hessian error {worst_hess:.2e}, min v'Hv {min_quad:.2e}"
    ))
}

fn kernel_dense() -> Outcome {
    let mut specs: Vec<ProblemSpec> = (0..5)
        .map(|seed| ProblemSpec::random_gaussian(10, 1 + seed as usize % 2, 15, seed))
        .collect();
    specs.push(ProblemSpec::diagonal(vec![4.0, 1.0, 0.25]));
    specs.push(reference_problem());
    specs.push(ProblemSpec::grid_source(GridParams::new(30, 3, 289), 5));
    specs.push(ProblemSpec::random_gaussian(40, 2, 300, 9));
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for spec in &specs {
        let (model, kernels) = precomputed(spec);
        for _ in 0..50 {
            let w: Vec<f64> = (0..model.m()).map(|_| rng.random::<f64>()).collect();
            let fast = model.objective(&kernels, &w).map_err(|e| e.to_string())?;
            let dense = model.objective_dense_oracle(&w).map_err(|e| e.to_string())?;
            let err = rel(fast, dense);
            ensure!(err <= 1e-10, "n = {}: {fast} vs {dense}", model.n());
            worst = worst.max(err);
        }
    }
    Ok(format!("{} models x 50 designs, max relative difference {worst:.2e}", specs.len()))
}

fn greedy_count() -> Outcome {
    let (model, kernels) = precomputed(&ProblemSpec::random_gaussian(50, 2, 60, 6));
    let run = |path| {
        greedy_sweep_with(&model, &kernels, 20, &GreedyOptions { path, clock: null_clock })
            .map_err(|e| e.to_string())
    };
    let full = run(UpdatePath::FullRecompute)?;
    ensure!(full.evaluations == 810, "{} evaluations", full.evaluations);
    for path in [UpdatePath::Parameter, UpdatePath::DataSpace] {
        let trace = run(path)?;
        ensure!(trace.evaluations == 810, "{path:?}: {} evaluations", trace.evaluations);
        ensure!(trace.selections == full.selections, "{path:?} selected {:?}", trace.selections);
    }
    Ok("810 evaluations; parameter, data-space and full-recompute selections identical".into())
}

fn quiet_informed() -> InformedOptions {
    InformedOptions {
        greedy: GreedyOptions {
            path: UpdatePath::Auto,
            clock: null_clock,
        },
        ..InformedOptions::default()
    }
}

fn check_structure(model: &Model, kernels: &Kernels) -> Result<aoed_core::ComparisonReport, String> {
    let opts = quiet_informed();
    let informed = informed_sweep(model, kernels, 3, 10, &opts).map_err(|e| e.to_string())?;
    let greedy = greedy_sweep_with(model, kernels, 10, &opts.greedy).map_err(|e| e.to_string())?;
    for (design, &m0) in informed.designs.iter().zip(&informed.m0_values) {
        ensure!(design.is_binary(), "m0 {m0}: non-binary design");
        ensure!(design.active_count() == m0, "m0 {m0}: {} active", design.active_count());
    }
    let report = compare_sweeps(&greedy, &informed).map_err(|e| e.to_string())?;
    ensure!(report.rows.len() == 8, "{} rows", report.rows.len());
    for row in &report.rows {
        let bound = row.j_relaxed.ok_or(format!("m0 {}: no relaxed value", row.m0))?;
        ensure!(
            bound <= row.j_greedy && bound <= row.j_informed,
            "m0 {}: relaxed {bound} above greedy {} or informed {}",
            row.m0,
            row.j_greedy,
            row.j_informed
        );
    }
    Ok(report)
}

fn informed_structure() -> Outcome {
    let start = Instant::now();
    let mut total_rows = 0;
    for seed in [0, 1, 7] {
        let (model, kernels) = precomputed(&ProblemSpec::grid_source(GridParams::new(24, 2, 49), seed));
        total_rows += check_structure(&model, &kernels)
            .map_err(|e| format!("seed {seed}: {e}"))?
            .rows
            .len();
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("3 seeded problems, {total_rows} rows binary, exact counts, bounded below"))
}

fn informed_departs() -> Outcome {
    let (model, kernels) = precomputed(&reference_problem());
    let report = check_structure(&model, &kernels)?;
    let improvements: Vec<f64> = report
        .rows
        .iter()
        .map(|r| (r.j_greedy - r.j_informed) / r.j_greedy)
        .collect();
    let mean = improvements.iter().sum::<f64>() / improvements.len() as f64;
    let best = improvements.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ensure!(
        (report.summary.mean_improvement - mean).abs() < 1e-15,
        "mean {} vs {mean}",
        report.summary.mean_improvement
    );
    ensure!(report.summary.best_improvement == best, "best {}", report.summary.best_improvement);

    let opts = quiet_informed();
    let informed = informed_sweep(&model, &kernels, 3, 10, &opts).map_err(|e| e.to_string())?;
    let greedy = greedy_sweep_with(&model, &kernels, 10, &opts.greedy).map_err(|e| e.to_string())?;
    let differing = informed
        .m0_values
        .iter()
        .zip(&informed.designs)
        .filter(|(m0, d)| greedy.design(**m0) != Some(*d))
        .count();
    ensure!(differing > 0, "informed designs identical to greedy");
    Ok(format!(
        "{differing} of 8 designs differ; mean improvement {:.2}%, best {:.2}%",
        100.0 * mean,
        100.0 * best
    ))
}

fn reconstruction() -> Outcome {
    let spec = reference_problem();
    let (model, kernels) = precomputed(&spec);
    let GridParams { n, extent, .. } = GridParams::new(24, 2, 49);
    let source = four_bump_source(n, extent);
    let data = synthetic_data(&model, &source, 9);
    let informed = informed_sweep(&model, &kernels, 3, 10, &quiet_informed()).map_err(|e| e.to_string())?;
    let design = informed.design(10).ok_or("no m0 = 10 design")?;

    let side = (n as f64).sqrt();
    let cell = (2.0 * extent / (side - 1.0)).powi(2);
    let l2 = |x: &DVector<f64>| ((x - &source).norm_squared() * cell).sqrt();
    let with_design = l2(&model.posterior_mean(design.weights(), &data).map_err(|e| e.to_string())?);
    let empty = l2(&model.posterior_mean(&vec![0.0; model.m()], &data).map_err(|e| e.to_string())?);
    ensure!(with_design < empty, "error {with_design} not below prior error {empty}");

    let consistent: Vec<f64> = (model.forward() * model.prior_mean()).iter().copied().collect();
    let mean = model.posterior_mean(design.weights(), &consistent).map_err(|e| e.to_string())?;
    let drift = (&mean - model.prior_mean()).amax();
    ensure!(drift <= 1e-10, "consistent data moved the mean by {drift:e}");
    Ok(format!("L2 error {with_design:.4e} with design vs {empty:.4e} prior; drift {drift:.1e}"))
}

fn projection() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(10);
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let mut worst_vi = f64::NEG_INFINITY;
    for case in 0..10_000 {
        let m = rng.random_range(1..=50);
        let budget = rng.random_range(1..=m);
        let set = CappedSimplex::new(m, budget).expect("valid budget");
        let scale = rng.random_range(0.5..4.0);
        let v: Vec<f64> = (0..m).map(|_| scale * rng.random_range(-1.0..1.5)).collect();
        let u: Vec<f64> = (0..m).map(|_| scale * rng.random_range(-1.0..1.5)).collect();
        let p = set.project(&v).expect("matching length");
        let pu = set.project(&u).expect("matching length");
        ensure!(set.contains(&p, 1e-12).expect("matching length"), "case {case}: infeasible");
        let pp = set.project(&p).expect("matching length");
        ensure!(dist(&p, &pp) <= 1e-10, "case {case}: not idempotent");
        ensure!(dist(&p, &pu) <= dist(&v, &u) + 1e-10, "case {case}: expansive");
        for _ in 0..100 {
            let raw: Vec<f64> = (0..m).map(|_| rng.random_range(-0.5..1.5)).collect();
            let z = set.project(&raw).expect("matching length");
            // <v - P(v), z - P(v)> <= 0 for every feasible z
            let vi: f64 = (0..m).map(|k| (v[k] - p[k]) * (z[k] - p[k])).sum();
            ensure!(vi <= 1e-10, "case {case}: variational inequality {vi:e}");
            worst_vi = worst_vi.max(vi);
        }
    }
    Ok(format!("10000 projections, max <v - P(v), z - P(v)> = {worst_vi:.2e}"))
}
