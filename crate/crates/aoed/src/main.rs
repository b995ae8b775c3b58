use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aoed::report::{self, write_json, write_text};
use aoed::{generate, load_model, save_model, GridParams, Noise, ProblemSpec};
use aoed_core::greedy::greedy_sweep_with;
use aoed_core::informed::DEFAULT_M0_START;
use aoed_core::{
    brute_force_best, certify, compare_sweeps, informed_sweep, null_clock, solve_relaxed, std_clock,
    Clock, GreedyOptions, InformedOptions, Kernels, Model, SolverOptions,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "aoed", version, about = "A-optimal sensor placement for linear-Gaussian inverse problems")]
struct Cli {
    /// Record zero elapsed time so that repeated runs produce identical files.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a problem and write it as a model directory.
    Generate(GenerateArgs),
    /// Run one design method over a budget or budget range.
    Solve(SolveArgs),
    /// Compare the plain and informed greedy sweeps against the relaxed lower bound.
    Compare(CompareArgs),
    /// Check the optimality certificate of a given weight vector.
    Certify(CertifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Diagonal,
    #[value(name = "random_gaussian", alias = "random-gaussian")]
    RandomGaussian,
    #[value(name = "grid_source", alias = "grid-source")]
    GridSource,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Prior variances for the diagonal family.
    #[arg(long, value_delimiter = ',')]
    variances: Vec<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise variance as a percentage of the mean prior-predictive variance.
    #[arg(long, conflicts_with = "noise_var")]
    noise_percent: Option<f64>,
    /// Fixed noise variance.
    #[arg(long)]
    noise_var: Option<f64>,
    #[arg(long, default_value_t = 0.3)]
    length_scale: f64,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    #[arg(long, default_value_t = 0.35)]
    extent: f64,
    #[arg(long, default_value_t = 0.8)]
    sensor_radius: f64,
    #[arg(long, default_value_t = 0.25)]
    obs_width: f64,
    #[arg(long, default_value_t = 1e-6)]
    prior_jitter: f64,
    #[arg(long, default_value_t = 0.4)]
    angle_jitter: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Greedy,
    Relaxed,
    Informed,
    Brute,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol_pg: f64,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            max_iters: self.max_iters,
            tol_pg: self.tol_pg,
            initial: None,
        }
    }
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("budget").required(true).args(["m0", "m0_range"])))]
struct SolveArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long)]
    m0: Option<usize>,
    /// Inclusive budget range `a:b`.
    #[arg(long, value_parser = parse_range)]
    m0_range: Option<(usize, usize)>,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 1)]
    prune_every: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = DEFAULT_M0_START)]
    m0_start: usize,
    #[arg(long)]
    m_max: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 1)]
    prune_every: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    m0: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<f64>,
    #[arg(long)]
    tol_grad: Option<f64>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `a:b`, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("range start: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("range end: {e}"))?;
    if a == 0 || a > b {
        return Err(format!("need 1 <= a <= b, got {a}:{b}"));
    }
    Ok((a, b))
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<aoed::Error> for Failure {
    fn from(e: aoed::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<aoed_core::Error> for Failure {
    fn from(e: aoed_core::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn usage(field: &str, message: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{field}: {message}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(failure) = configure_threads() {
        return report_failure(failure);
    }
    let clock: Clock = if cli.no_timing { null_clock } else { std_clock };
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args, clock),
        Command::Compare(args) => cmd_compare(args, clock),
        Command::Certify(args) => cmd_certify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => report_failure(failure),
    }
}

fn report_failure(failure: Failure) -> ExitCode {
    match failure {
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Failure::Runtime(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("AOED_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage("AOED_THREADS", format!("expected a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let family_noise = |spec: &mut ProblemSpec| {
        if let Some(p) = args.noise_percent {
            spec.noise = Noise::Percent(p);
        }
        if let Some(v) = args.noise_var {
            spec.noise = Noise::Variance(v);
        }
    };
    let mut spec = match args.family {
        FamilyArg::Diagonal => {
            if args.variances.is_empty() {
                return Err(usage("variances", "required for the diagonal family"));
            }
            ProblemSpec::diagonal(args.variances.clone())
        }
        FamilyArg::RandomGaussian => {
            let m = args.m.ok_or_else(|| usage("m", "required for random_gaussian"))?;
            let n = args.n.ok_or_else(|| usage("n", "required for random_gaussian"))?;
            ProblemSpec::random_gaussian(m, args.d, n, args.seed)
        }
        FamilyArg::GridSource => {
            let m = args.m.ok_or_else(|| usage("m", "required for grid_source"))?;
            let n = args.n.ok_or_else(|| usage("n", "required for grid_source"))?;
            let params = GridParams {
                length_scale: args.length_scale,
                amplitude: args.amplitude,
                extent: args.extent,
                sensor_radius: args.sensor_radius,
                obs_width: args.obs_width,
                prior_jitter: args.prior_jitter,
                angle_jitter: args.angle_jitter,
                ..GridParams::new(m, args.d, n)
            };
            ProblemSpec::grid_source(params, args.seed)
        }
    };
    family_noise(&mut spec);
    let model = generate(&spec).map_err(|e| match e {
        aoed::Error::InvalidSpec(msg) => usage("spec", msg),
        other => other.into(),
    })?;
    save_model(&model, &args.out, Some(&spec))?;
    println!(
        "m={} d={} n={} noise_var={:e}",
        model.m(),
        model.d(),
        model.n(),
        model.noise_var()
    );
    Ok(())
}

fn load(path: &Path) -> Result<(Model, Kernels), Failure> {
    let (model, _) = load_model(path)?;
    let kernels = model.precompute();
    Ok((model, kernels))
}

fn check_budget(field: &str, value: usize, m: usize) -> Result<(), Failure> {
    if value == 0 || value > m {
        return Err(usage(field, format!("must be in 1..={m}, got {value}")));
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs, clock: Clock) -> Result<(), Failure> {
    let (model, kernels) = load(&args.model)?;
    let (lo, hi) = match (args.m0, args.m0_range) {
        (Some(k), _) => (k, k),
        (None, Some(range)) => range,
        (None, None) => unreachable!("clap enforces the budget group"),
    };
    let field = if args.m0.is_some() { "m0" } else { "m0-range" };
    check_budget(field, lo, model.m())?;
    check_budget(field, hi, model.m())?;
    let greedy_opts = GreedyOptions {
        clock,
        ..Default::default()
    };

    let mut designs: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut objectives: Vec<(usize, f64)> = Vec::new();
    match args.method {
        Method::Greedy => {
            let trace = greedy_sweep_with(&model, &kernels, hi, &greedy_opts)?;
            for m0 in lo..=hi {
                designs.push((m0, trace.design(m0).unwrap().weights().to_vec()));
                objectives.push((m0, trace.objective(m0).unwrap()));
            }
        }
        Method::Relaxed => {
            let mut certificates = Vec::new();
            let mut initial = None;
            for m0 in lo..=hi {
                let opts = SolverOptions {
                    initial: initial.take(),
                    ..args.solver.options()
                };
                let sol = solve_relaxed(&model, &kernels, m0, &opts)?;
                let cert = certify(&model, &kernels, sol.w_star.weights(), m0, None)?;
                certificates.push(report::certificate_json(m0, &cert, Some(&sol)));
                designs.push((m0, sol.w_star.weights().to_vec()));
                objectives.push((m0, sol.objective_value));
                initial = Some(sol.w_star.into_weights());
            }
            write_json(
                &args.out,
                report::CERTIFICATE_FILE,
                &serde_json::Value::Array(certificates),
            )?;
        }
        Method::Informed => {
            let opts = InformedOptions {
                relaxed: args.solver.options(),
                prune_every: args.prune_every.max(1),
                greedy: greedy_opts,
                ..Default::default()
            };
            let trace = informed_sweep(&model, &kernels, lo, hi, &opts)?;
            let greedy = greedy_sweep_with(&model, &kernels, hi, &greedy_opts)?;
            let comparison = compare_sweeps(&greedy, &trace)?;
            for (i, &m0) in trace.m0_values.iter().enumerate() {
                designs.push((m0, trace.designs[i].weights().to_vec()));
                objectives.push((m0, trace.objectives[i]));
            }
            write_text(&args.out, report::COMPARISON_CSV, &report::comparison_csv(&comparison))?;
            write_json(&args.out, report::COMPARISON_JSON, &report::comparison_json(&comparison))?;
        }
        Method::Brute => {
            for m0 in lo..=hi {
                let (design, value) = brute_force_best(&model, &kernels, m0)?;
                designs.push((m0, design.into_weights()));
                objectives.push((m0, value));
            }
        }
    }
    let rows: Vec<(usize, &[f64])> = designs.iter().map(|(m0, w)| (*m0, w.as_slice())).collect();
    write_text(&args.out, report::DESIGNS_FILE, &report::designs_csv(&rows))?;
    write_text(&args.out, report::OBJECTIVES_FILE, &report::objectives_csv(&objectives))?;
    Ok(())
}

fn cmd_compare(args: CompareArgs, clock: Clock) -> Result<(), Failure> {
    let (model, kernels) = load(&args.model)?;
    check_budget("m-max", args.m_max, model.m())?;
    if args.m0_start == 0 || args.m0_start > args.m_max {
        return Err(usage(
            "m0-start",
            format!("must be in 1..={}, got {}", args.m_max, args.m0_start),
        ));
    }
    let greedy_opts = GreedyOptions {
        clock,
        ..Default::default()
    };
    let greedy = greedy_sweep_with(&model, &kernels, args.m_max, &greedy_opts)?;
    let opts = InformedOptions {
        relaxed: args.solver.options(),
        prune_every: args.prune_every.max(1),
        greedy: greedy_opts,
        ..Default::default()
    };
    let informed = informed_sweep(&model, &kernels, args.m0_start, args.m_max, &opts)?;
    let comparison = compare_sweeps(&greedy, &informed)?;

    write_text(&args.out, report::COMPARISON_CSV, &report::comparison_csv(&comparison))?;
    write_json(&args.out, report::COMPARISON_JSON, &report::comparison_json(&comparison))?;
    let rows: Vec<(usize, &[f64])> = informed
        .m0_values
        .iter()
        .zip(&informed.designs)
        .map(|(&m0, d)| (m0, d.weights()))
        .collect();
    write_text(&args.out, report::DESIGNS_FILE, &report::designs_csv(&rows))?;

    let s = &comparison.summary;
    println!(
        "mean improvement {:.3}%, best-case {:.3}%, informed no worse at {:.0}% of budgets; \
         relaxed solves {:.3} s of {:.3} s informed total (greedy {:.3} s)",
        100.0 * s.mean_improvement,
        100.0 * s.best_improvement,
        100.0 * s.fraction_not_worse,
        s.informed_relaxed_seconds,
        s.informed_total_seconds,
        s.greedy_seconds,
    );
    Ok(())
}

fn cmd_certify(args: CertifyArgs) -> Result<(), Failure> {
    let (model, kernels) = load(&args.model)?;
    check_budget("m0", args.m0, model.m())?;
    if args.weights.len() != model.m() {
        return Err(usage(
            "weights",
            format!("expected {} entries, got {}", model.m(), args.weights.len()),
        ));
    }
    let cert = certify(&model, &kernels, &args.weights, args.m0, args.tol_grad)?;
    let value = report::certificate_json(args.m0, &cert, None);
    println!("{}", serde_json::to_string_pretty(&value).expect("json serializes"));
    Ok(())
}
