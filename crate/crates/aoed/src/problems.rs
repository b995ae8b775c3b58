//! Deterministic problem families and noise calibration.
//!
//! Random draws use ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`) and
//! standard normals from `rand_distr::StandardNormal`, consumed in row-major order.

use std::f64::consts::PI;

use aoed_core::Model;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator family and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `F = I`, `C_prior = diag(variances)`, one measurement per sensor.
    Diagonal { variances: Vec<f64> },
    /// `F` with i.i.d. standard normal entries; `C_prior = A^T A / n + 1e-6 I`.
    RandomGaussian { m: usize, d: usize, n: usize },
    /// Sources on a square grid observed through Gaussian smoothing kernels by
    /// sensors on a surrounding circle.
    GridSource(GridParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub m: usize,
    pub d: usize,
    /// Number of grid points; must be a perfect square.
    pub n: usize,
    /// Squared-exponential prior length scale.
    pub length_scale: f64,
    /// Prior marginal variance.
    pub amplitude: f64,
    /// Grid covers `[-extent, extent]^2`.
    pub extent: f64,
    pub sensor_radius: f64,
    /// Width of the first observation kernel; row `i` of a block uses
    /// `obs_width * 1.5^i`.
    pub obs_width: f64,
    /// Relative diagonal jitter on the prior.
    pub prior_jitter: f64,
    /// Maximum random angular offset of each sensor, as a fraction of the
    /// angular spacing.
    pub angle_jitter: f64,
}

impl GridParams {
    pub fn new(m: usize, d: usize, n: usize) -> Self {
        Self {
            m,
            d,
            n,
            length_scale: 0.3,
            amplitude: 1.0,
            extent: 0.35,
            sensor_radius: 0.8,
            obs_width: 0.25,
            prior_jitter: 1e-6,
            angle_jitter: 0.4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Noise {
    /// Percentage of the mean prior-predictive variance.
    Percent(f64),
    /// Fixed noise variance.
    Variance(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    #[serde(flatten)]
    pub family: Family,
    pub seed: u64,
    pub noise: Noise,
}

impl ProblemSpec {
    /// Diagonal family with unit noise variance.
    pub fn diagonal(variances: Vec<f64>) -> Self {
        Self {
            family: Family::Diagonal { variances },
            seed: 0,
            noise: Noise::Variance(1.0),
        }
    }

    pub fn random_gaussian(m: usize, d: usize, n: usize, seed: u64) -> Self {
        Self {
            family: Family::RandomGaussian { m, d, n },
            seed,
            noise: Noise::Percent(1.0),
        }
    }

    pub fn grid_source(params: GridParams, seed: u64) -> Self {
        Self {
            family: Family::GridSource(params),
            seed,
            noise: Noise::Percent(1.0),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be positive, got {v}")))
            }
        };
        let dims = |m: usize, d: usize, n: usize| {
            if m == 0 || d == 0 || n == 0 {
                Err(Error::InvalidSpec(format!(
                    "dimensions must be positive, got m={m}, d={d}, n={n}"
                )))
            } else {
                Ok(())
            }
        };
        match self.noise {
            Noise::Percent(p) => positive("noise_percent", p)?,
            Noise::Variance(v) => positive("noise_var", v)?,
        }
        match &self.family {
            Family::Diagonal { variances } => {
                if variances.is_empty() {
                    return Err(Error::InvalidSpec("variances must not be empty".into()));
                }
                for &v in variances {
                    positive("variance", v)?;
                }
            }
            Family::RandomGaussian { m, d, n } => dims(*m, *d, *n)?,
            Family::GridSource(p) => {
                dims(p.m, p.d, p.n)?;
                if grid_side(p.n).is_none() {
                    return Err(Error::InvalidSpec(format!(
                        "grid_source needs a square number of grid points, got n={}",
                        p.n
                    )));
                }
                positive("length_scale", p.length_scale)?;
                positive("amplitude", p.amplitude)?;
                positive("extent", p.extent)?;
                positive("sensor_radius", p.sensor_radius)?;
                positive("obs_width", p.obs_width)?;
                if p.prior_jitter.is_nan() || p.prior_jitter < 0.0 || !(0.0..1.0).contains(&p.angle_jitter) {
                    return Err(Error::InvalidSpec(
                        "prior_jitter must be >= 0 and angle_jitter in [0, 1)".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn grid_side(n: usize) -> Option<usize> {
    let side = (n as f64).sqrt().round() as usize;
    (side * side == n).then_some(side)
}

/// Builds the model described by `spec`; a pure function of the spec.
pub fn generate(spec: &ProblemSpec) -> Result<Model> {
    spec.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let (forward, m, d, prior_cov) = match &spec.family {
        Family::Diagonal { variances } => {
            let n = variances.len();
            let cov = DMatrix::from_diagonal(&DVector::from_column_slice(variances));
            (DMatrix::identity(n, n), n, 1, cov)
        }
        Family::RandomGaussian { m, d, n } => {
            let forward = normal_matrix(&mut rng, m * d, *n);
            let a = normal_matrix(&mut rng, *n, *n);
            let mut cov = a.transpose() * &a / *n as f64;
            for i in 0..*n {
                cov[(i, i)] += 1e-6;
            }
            symmetrize(&mut cov);
            (forward, *m, *d, cov)
        }
        Family::GridSource(p) => {
            let (forward, cov) = grid_source(p, &mut rng);
            (forward, p.m, p.d, cov)
        }
    };
    let n = forward.ncols();
    let noise_var = match spec.noise {
        Noise::Variance(v) => v,
        Noise::Percent(p) => prior_predictive_mean_variance(&forward, &prior_cov) * p / 100.0,
    };
    Ok(Model::new(
        forward,
        m,
        d,
        prior_cov,
        DVector::zeros(n),
        noise_var,
    )?)
}

/// Seed of the reference grid-source problem ([`reference_problem`]).
pub const REFERENCE_SEED: u64 = 2;

/// Grid-source problem with `n = 49`, `m = 24`, `d = 2` on which the informed
/// sweep over budgets 3..=10 departs from plain greedy.
pub fn reference_problem() -> ProblemSpec {
    ProblemSpec::grid_source(GridParams::new(24, 2, 49), REFERENCE_SEED)
}

/// `sigma^2 = (noise_percent / 100) * mean(diag(F C_prior F^T))`.
pub fn calibrate_noise(model: &Model, noise_percent: f64) -> f64 {
    prior_predictive_mean_variance(model.forward(), model.prior_cov()) * noise_percent / 100.0
}

fn prior_predictive_mean_variance(forward: &DMatrix<f64>, prior_cov: &DMatrix<f64>) -> f64 {
    let fc = forward * prior_cov;
    let total: f64 = fc.component_mul(forward).sum();
    total / forward.nrows() as f64
}

fn normal_matrix(rng: &mut ChaCha20Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    let values: Vec<f64> = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    DMatrix::from_row_slice(rows, cols, &values)
}

fn symmetrize(a: &mut DMatrix<f64>) {
    let t = a.transpose();
    *a += t;
    *a *= 0.5;
}

/// Grid point coordinates in row-major order.
pub fn grid_points(n: usize, extent: f64) -> Vec<[f64; 2]> {
    let side = grid_side(n).expect("square grid");
    let coord = |i: usize| {
        if side == 1 {
            0.0
        } else {
            -extent + 2.0 * extent * i as f64 / (side - 1) as f64
        }
    };
    (0..n).map(|j| [coord(j % side), coord(j / side)]).collect()
}

/// Sensor coordinates for a grid-source problem; consumes `m` uniforms.
fn sensor_points(p: &GridParams, rng: &mut ChaCha20Rng) -> Vec<[f64; 2]> {
    (0..p.m)
        .map(|k| {
            let offset = p.angle_jitter * (rng.random::<f64>() - 0.5);
            let theta = 2.0 * PI * (k as f64 + offset) / p.m as f64;
            [p.sensor_radius * theta.cos(), p.sensor_radius * theta.sin()]
        })
        .collect()
}

fn grid_source(p: &GridParams, rng: &mut ChaCha20Rng) -> (DMatrix<f64>, DMatrix<f64>) {
    let grid = grid_points(p.n, p.extent);
    let sensors = sensor_points(p, rng);
    let side = grid_side(p.n).expect("validated");
    let spacing = if side > 1 {
        2.0 * p.extent / (side - 1) as f64
    } else {
        2.0 * p.extent
    };
    let cell = spacing * spacing;

    let forward = DMatrix::from_fn(p.m * p.d, p.n, |row, j| {
        let (k, i) = (row / p.d, row % p.d);
        let width = p.obs_width * 1.5f64.powi(i as i32);
        let r2 = dist2(sensors[k], grid[j]);
        cell * (-r2 / (2.0 * width * width)).exp() / (2.0 * PI * width * width)
    });
    let ell2 = p.length_scale * p.length_scale;
    let mut cov = DMatrix::from_fn(p.n, p.n, |i, j| {
        p.amplitude * (-dist2(grid[i], grid[j]) / (2.0 * ell2)).exp()
    });
    for i in 0..p.n {
        cov[(i, i)] += p.prior_jitter * p.amplitude;
    }
    (forward, cov)
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Four Gaussian bumps of width `extent / 4` centred at `(+-r, +-r)` with
/// `r = extent / 3`, sampled at the grid points of a grid-source problem.
pub fn four_bump_source(n: usize, extent: f64) -> DVector<f64> {
    let r = extent / 3.0;
    let width = extent / 4.0;
    let centres = [[r, r], [-r, r], [-r, -r], [r, -r]];
    let grid = grid_points(n, extent);
    DVector::from_iterator(
        n,
        grid.iter().map(|&x| {
            centres
                .iter()
                .map(|&c| (-dist2(x, c) / (2.0 * width * width)).exp())
                .sum()
        }),
    )
}

/// Noisy observations `F f + eps` with `eps ~ N(0, noise_var I)` drawn from `seed`.
pub fn synthetic_data(model: &Model, source: &DVector<f64>, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let sd = model.noise_var().sqrt();
    (model.forward() * source)
        .iter()
        .map(|&v| v + sd * rng.sample::<f64, _>(StandardNormal))
        .collect()
}
