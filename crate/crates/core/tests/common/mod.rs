#![allow(dead_code)]

use aoed_core::Model;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian forward matrix, Wishart-like prior, noise at `noise_frac` of the mean
/// prior-predictive variance.
pub fn random_model(seed: u64, m: usize, d: usize, n: usize, noise_frac: f64) -> Model {
    let mut rng = rng(seed);
    let forward = DMatrix::from_fn(m * d, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut cov = a.transpose() * &a / n as f64;
    cov = (&cov + cov.transpose()) * 0.5;
    for i in 0..n {
        cov[(i, i)] += 1e-3;
    }
    let mean = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let k = &forward * &cov * forward.transpose();
    let noise = noise_frac * k.trace() / (m * d) as f64;
    Model::new(forward, m, d, cov, mean, noise).unwrap()
}

/// Squared-exponential prior on a 1-D grid observed through Gaussian blurs.
pub fn se_model(seed: u64, m: usize, d: usize, n: usize) -> Model {
    let mut rng = rng(seed);
    let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let centres: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
    let forward = DMatrix::from_fn(m * d, n, |row, j| {
        let width = 0.05 * (1 + row % d) as f64;
        (-(xs[j] - centres[row / d]).powi(2) / (2.0 * width * width)).exp() / n as f64
    });
    let mut cov = DMatrix::from_fn(n, n, |i, j| (-(xs[i] - xs[j]).powi(2) / (2.0 * 0.1f64.powi(2))).exp());
    for i in 0..n {
        cov[(i, i)] += 1e-6;
    }
    let k = &forward * &cov * forward.transpose();
    let noise = 0.01 * k.trace() / (m * d) as f64;
    Model::new(forward, m, d, cov, DVector::zeros(n), noise).unwrap()
}

pub fn diag_model(variances: &[f64]) -> Model {
    let n = variances.len();
    Model::new(
        DMatrix::identity(n, n),
        n,
        1,
        DMatrix::from_diagonal(&DVector::from_column_slice(variances)),
        DVector::zeros(n),
        1.0,
    )
    .unwrap()
}

/// Uniform weights in `[lo, hi]`.
pub fn random_weights(rng: &mut impl Rng, m: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..m).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Every binary design with exactly `count` ones, as weight vectors.
pub fn all_binary(m: usize, count: usize) -> Vec<Vec<f64>> {
    (0u32..(1 << m))
        .filter(|mask| mask.count_ones() as usize == count)
        .map(|mask| (0..m).map(|k| f64::from((mask >> k) & 1)).collect())
        .collect()
}
