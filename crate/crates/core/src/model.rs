//! The Bayesian linear-Gaussian inverse problem and the A-optimal objective.
//!
//! Data are `g = F_w f + eps` with `eps ~ N(0, sigma^2 I)` and prior
//! `f ~ N(m_prior, C_prior)`. The forward matrix stacks one block of `d` rows per
//! candidate sensor. For a weight vector `w` in `[0, 1]^m` the posterior precision
//! is taken linear in the weights,
//!
//! ```text
//! C_post(w)^-1 = C_prior^-1 + (1/sigma^2) * sum_k w_k F_k^T F_k,
//! ```
//!
//! which agrees with the masked forward operator on binary designs and keeps
//! `J(w) = tr(C_post(w))` convex on the relaxed set.
//!
//! All evaluations against [`Kernels`] work in data space (dimension `m * d`):
//! with `S = diag(sqrt(w)) (x) I_d`, `K = F C_prior F^T`, `L = F C_prior^2 F^T` and
//! `M = sigma^2 I + S K S`, the Woodbury identity gives
//!
//! ```text
//! J(w) = tr(C_prior) - tr(M^-1 S L S)
//! F C_post = P F C_prior,    P = I - K S M^-1 S
//! dJ/dw_k = -(1/sigma^2) tr[(P L P^T)_kk]
//! d2J/dw_k dw_l = (2/sigma^4) sum_{i in k, j in l} (P K)_ij (P L P^T)_ij
//! ```
//!
//! so no solve in parameter space is needed once the kernels exist.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{block_trace, cholesky_with_jitter, is_symmetric, symmetrize, Chol};

/// Relative tolerance for the symmetry check on the prior covariance.
const SYMMETRY_TOL: f64 = 1e-12;

/// Feasibility slack applied to design weights and budgets.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    forward: DMatrix<f64>,
    m: usize,
    d: usize,
    prior_cov: DMatrix<f64>,
    prior_mean: DVector<f64>,
    noise_var: f64,
    prior_jitter: f64,
}

/// Data-space matrices from which the objective and its derivatives are evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernels {
    /// `F C_prior F^T`.
    pub k: DMatrix<f64>,
    /// `F C_prior^2 F^T`.
    pub l: DMatrix<f64>,
    /// `tr(C_prior)`.
    pub prior_trace: f64,
}

/// Objective and gradient at one design, sharing a single factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objective: f64,
    pub gradient: Vec<f64>,
}

impl Model {
    /// Validates and assembles a model.
    ///
    /// If the prior covariance fails Cholesky once, `1e-12 * tr(C_prior) / n` is added
    /// to its diagonal and the jittered matrix is stored; a second failure is
    /// [`Error::NotSpd`].
    pub fn new(
        forward: DMatrix<f64>,
        m: usize,
        d: usize,
        prior_cov: DMatrix<f64>,
        prior_mean: DVector<f64>,
        noise_var: f64,
    ) -> Result<Self> {
        let n = forward.ncols();
        if m == 0 {
            return Err(Error::DimensionMismatch {
                what: "sensor count",
                expected: 1,
                found: 0,
            });
        }
        if d == 0 {
            return Err(Error::DimensionMismatch {
                what: "measurements per sensor",
                expected: 1,
                found: 0,
            });
        }
        if n == 0 {
            return Err(Error::DimensionMismatch {
                what: "parameter dimension",
                expected: 1,
                found: 0,
            });
        }
        if forward.nrows() != m * d {
            return Err(Error::DimensionMismatch {
                what: "forward rows",
                expected: m * d,
                found: forward.nrows(),
            });
        }
        if prior_cov.nrows() != n || prior_cov.ncols() != n {
            return Err(Error::DimensionMismatch {
                what: "prior covariance",
                expected: n,
                found: if prior_cov.nrows() != n {
                    prior_cov.nrows()
                } else {
                    prior_cov.ncols()
                },
            });
        }
        if prior_mean.len() != n {
            return Err(Error::DimensionMismatch {
                what: "prior mean",
                expected: n,
                found: prior_mean.len(),
            });
        }
        if !(noise_var > 0.0 && noise_var.is_finite()) {
            return Err(Error::NonPositiveNoise(noise_var));
        }
        if !is_symmetric(&prior_cov, SYMMETRY_TOL) {
            return Err(Error::NotSpd);
        }
        let (_, prior_jitter) = cholesky_with_jitter(&prior_cov).ok_or(Error::NotSpd)?;
        let mut prior_cov = prior_cov;
        if prior_jitter > 0.0 {
            for i in 0..n {
                prior_cov[(i, i)] += prior_jitter;
            }
        }
        Ok(Self {
            forward,
            m,
            d,
            prior_cov,
            prior_mean,
            noise_var,
            prior_jitter,
        })
    }

    pub fn forward(&self) -> &DMatrix<f64> {
        &self.forward
    }

    /// Number of candidate sensors.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Measurements per sensor.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Parameter dimension.
    pub fn n(&self) -> usize {
        self.forward.ncols()
    }

    pub fn prior_cov(&self) -> &DMatrix<f64> {
        &self.prior_cov
    }

    pub fn prior_mean(&self) -> &DVector<f64> {
        &self.prior_mean
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    /// Diagonal shift applied to the prior during validation (zero if none).
    pub fn prior_jitter(&self) -> f64 {
        self.prior_jitter
    }

    /// The `d x n` observation block of sensor `k`.
    pub fn sensor_block(&self, k: usize) -> nalgebra::DMatrixView<'_, f64> {
        self.forward.rows(k * self.d, self.d)
    }

    pub fn precompute(&self) -> Kernels {
        let fc = &self.forward * &self.prior_cov;
        let mut k = &fc * self.forward.transpose();
        let mut l = &fc * fc.transpose();
        symmetrize(&mut k);
        symmetrize(&mut l);
        Kernels {
            k,
            l,
            prior_trace: self.prior_cov.trace(),
        }
    }

    /// `J(w) = tr(C_post(w))`.
    pub fn objective(&self, kernels: &Kernels, w: &[f64]) -> Result<f64> {
        let point = DataSpacePoint::new(self, kernels, w)?;
        point.objective(kernels)
    }

    pub fn gradient(&self, kernels: &Kernels, w: &[f64]) -> Result<Vec<f64>> {
        let point = DataSpacePoint::new(self, kernels, w)?;
        let g = point.posterior_sq_kernel(kernels);
        let grad = self.block_gradient(&g);
        check_finite(&grad)?;
        Ok(grad)
    }

    /// Objective and gradient from one factorization.
    pub fn evaluate(&self, kernels: &Kernels, w: &[f64]) -> Result<Evaluation> {
        let point = DataSpacePoint::new(self, kernels, w)?;
        let objective = point.objective(kernels)?;
        let g = point.posterior_sq_kernel(kernels);
        let gradient = self.block_gradient(&g);
        check_finite(&gradient)?;
        Ok(Evaluation {
            objective,
            gradient,
        })
    }

    /// Full `m x m` Hessian of `J` at `w`.
    pub fn hessian(&self, kernels: &Kernels, w: &[f64]) -> Result<DMatrix<f64>> {
        let point = DataSpacePoint::new(self, kernels, w)?;
        let g = point.posterior_sq_kernel(kernels);
        let q = &point.p * &kernels.k;
        let (m, d) = (self.m, self.d);
        let scale = 2.0 / (self.noise_var * self.noise_var);
        let mut h = DMatrix::zeros(m, m);
        for k in 0..m {
            for l in k..m {
                let mut acc = 0.0;
                for i in k * d..(k + 1) * d {
                    for j in l * d..(l + 1) * d {
                        acc += q[(i, j)] * g[(i, j)];
                    }
                }
                h[(k, l)] = scale * acc;
                h[(l, k)] = scale * acc;
            }
        }
        Ok(h)
    }

    /// Hessian-vector product `H(w) v`.
    pub fn hessian_apply(&self, kernels: &Kernels, w: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        check_len("direction", self.m, v.len())?;
        let h = self.hessian(kernels, w)?;
        let hv = h * DVector::from_column_slice(v);
        let out: Vec<f64> = hv.iter().copied().collect();
        check_finite(&out)?;
        Ok(out)
    }

    /// Posterior mean for observations `data` (length `m * d`) under design `w`.
    ///
    /// Residual blocks are weighted by `w_k`, so blocks with `w_k = 0` are ignored.
    pub fn posterior_mean(&self, w: &[f64], data: &[f64]) -> Result<DVector<f64>> {
        check_len("design", self.m, w.len())?;
        check_len("data", self.m * self.d, data.len())?;
        let fc = &self.forward * &self.prior_cov;
        let mut k = &fc * self.forward.transpose();
        symmetrize(&mut k);
        let s = self.sqrt_weights(w);
        let m_chol = data_space_system(&k, &s, self.noise_var)?;

        let residual = DVector::from_column_slice(data) - &self.forward * &self.prior_mean;
        let mut u = residual;
        for (i, ui) in u.iter_mut().enumerate() {
            *ui *= clamp_weight(w[i / self.d]) / self.noise_var;
        }
        // C_post F^T W r / sigma^2 = C F^T (u - S M^-1 S K u)
        let mut sku = &k * &u;
        sku.component_mul_assign(&s);
        let mut correction = m_chol.solve(&sku);
        correction.component_mul_assign(&s);
        let v = u - correction;
        Ok(&self.prior_mean + fc.transpose() * v)
    }

    /// `tr(C_post(w))` from a dense `n x n` factorization, independent of the
    /// data-space route. Uses the prior-whitened precision
    /// `I + R^T F^T W F R / sigma^2` with `C_prior = R R^T`, so that
    /// `C_post = R (I + ...)^-1 R^T`.
    pub fn objective_dense_oracle(&self, w: &[f64]) -> Result<f64> {
        check_len("design", self.m, w.len())?;
        let n = self.n();
        let (prior_chol, _) = cholesky_with_jitter(&self.prior_cov).ok_or(Error::NotSpd)?;
        let r = prior_chol.l();
        let mut fr = &self.forward * &r;
        for i in 0..fr.nrows() {
            let sw = libm::sqrt(clamp_weight(w[i / self.d]));
            fr.row_mut(i).scale_mut(sw);
        }
        let mut precision = fr.transpose() * &fr / self.noise_var;
        for i in 0..n {
            precision[(i, i)] += 1.0;
        }
        symmetrize(&mut precision);
        let (whitened, _) = cholesky_with_jitter(&precision).ok_or(Error::NotSpd)?;
        let y = whitened
            .l()
            .solve_lower_triangular(&r.transpose())
            .ok_or(Error::NotSpd)?;
        let trace = y.norm_squared();
        if !trace.is_finite() {
            return Err(Error::NonFiniteObjective);
        }
        Ok(trace)
    }

    /// Dense `n x n` posterior covariance for design `w`.
    pub fn posterior_cov(&self, w: &[f64]) -> Result<DMatrix<f64>> {
        check_len("design", self.m, w.len())?;
        let (prior_chol, _) = cholesky_with_jitter(&self.prior_cov).ok_or(Error::NotSpd)?;
        let r = prior_chol.l();
        let mut fr = &self.forward * &r;
        for i in 0..fr.nrows() {
            let sw = libm::sqrt(clamp_weight(w[i / self.d]));
            fr.row_mut(i).scale_mut(sw);
        }
        let mut precision = fr.transpose() * &fr / self.noise_var;
        for i in 0..self.n() {
            precision[(i, i)] += 1.0;
        }
        symmetrize(&mut precision);
        let (whitened, _) = cholesky_with_jitter(&precision).ok_or(Error::NotSpd)?;
        let y = whitened
            .l()
            .solve_lower_triangular(&r.transpose())
            .ok_or(Error::NotSpd)?;
        let mut cov = y.transpose() * y;
        symmetrize(&mut cov);
        Ok(cov)
    }

    fn sqrt_weights(&self, w: &[f64]) -> DVector<f64> {
        DVector::from_fn(self.m * self.d, |i, _| libm::sqrt(clamp_weight(w[i / self.d])))
    }

    fn block_gradient(&self, g: &DMatrix<f64>) -> Vec<f64> {
        let scale = -1.0 / self.noise_var;
        (0..self.m)
            .map(|k| scale * block_trace(g, k, self.d))
            .collect()
    }
}

/// Negative weights carry no information; they are treated as zero.
fn clamp_weight(w: f64) -> f64 {
    if w > 0.0 {
        w
    } else {
        0.0
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        });
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteObjective)
    }
}

/// Factorizes `sigma^2 I + S K S`.
fn data_space_system(k: &DMatrix<f64>, s: &DVector<f64>, noise_var: f64) -> Result<Chol> {
    let dim = k.nrows();
    let mut sys = DMatrix::from_fn(dim, dim, |i, j| s[i] * k[(i, j)] * s[j]);
    for i in 0..dim {
        sys[(i, i)] += noise_var;
    }
    symmetrize(&mut sys);
    nalgebra::Cholesky::new(sys).ok_or(Error::NonFiniteObjective)
}

/// Factorized data-space quantities at one design.
struct DataSpacePoint {
    s: DVector<f64>,
    chol: Chol,
    /// `I - K S M^-1 S`.
    p: DMatrix<f64>,
}

impl DataSpacePoint {
    fn new(model: &Model, kernels: &Kernels, w: &[f64]) -> Result<Self> {
        check_len("design", model.m, w.len())?;
        let dim = model.m * model.d;
        if kernels.k.nrows() != dim {
            return Err(Error::DimensionMismatch {
                what: "kernels",
                expected: dim,
                found: kernels.k.nrows(),
            });
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteObjective);
        }
        let s = model.sqrt_weights(w);
        let chol = data_space_system(&kernels.k, &s, model.noise_var)?;
        // T = M^-1 S, then P = I - K S T.
        let t = chol.solve(&DMatrix::from_diagonal(&s));
        let mut ks = kernels.k.clone();
        for (j, sj) in s.iter().enumerate() {
            ks.column_mut(j).scale_mut(*sj);
        }
        let mut p = -(ks * t);
        for i in 0..dim {
            p[(i, i)] += 1.0;
        }
        Ok(Self { s, chol, p })
    }

    fn objective(&self, kernels: &Kernels) -> Result<f64> {
        let dim = self.s.len();
        let sls = DMatrix::from_fn(dim, dim, |i, j| self.s[i] * kernels.l[(i, j)] * self.s[j]);
        let reduction = self.chol.solve(&sls).trace();
        let value = kernels.prior_trace - reduction;
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective);
        }
        Ok(value)
    }

    /// `F C_post^2 F^T = P L P^T`.
    fn posterior_sq_kernel(&self, kernels: &Kernels) -> DMatrix<f64> {
        let mut g = &self.p * &kernels.l * self.p.transpose();
        symmetrize(&mut g);
        g
    }
}

/// A weight vector on the candidate sensors together with the budget it was
/// built for.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    weights: Vec<f64>,
    budget: usize,
}

impl Design {
    /// Validates `0 <= w_k <= 1` and `sum(w) <= budget` up to [`FEASIBILITY_TOL`].
    pub fn new(weights: Vec<f64>, budget: usize) -> Result<Self> {
        let m = weights.len();
        if budget == 0 || budget > m {
            return Err(Error::InvalidBudget { budget, m });
        }
        let in_box = weights
            .iter()
            .all(|v| (-FEASIBILITY_TOL..=1.0 + FEASIBILITY_TOL).contains(v));
        let sum: f64 = weights.iter().sum();
        if !in_box || sum > budget as f64 + FEASIBILITY_TOL {
            return Err(Error::InvalidBudget { budget, m });
        }
        Ok(Self { weights, budget })
    }

    /// Binary design with ones at `active`; the budget is `active.len()`, or 1 when
    /// `active` is empty.
    pub fn from_active(m: usize, active: &[usize]) -> Result<Self> {
        let mut weights = vec![0.0; m];
        for &k in active {
            if k >= m {
                return Err(Error::DimensionMismatch {
                    what: "sensor index",
                    expected: m,
                    found: k,
                });
            }
            weights[k] = 1.0;
        }
        let count = weights.iter().filter(|&&v| v == 1.0).count();
        Self::new(weights, count.max(1))
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Every entry is exactly `0.0` or `1.0`.
    pub fn is_binary(&self) -> bool {
        is_binary(&self.weights)
    }

    /// Number of nonzero entries.
    pub fn active_count(&self) -> usize {
        self.weights.iter().filter(|&&v| v != 0.0).count()
    }

    pub fn active_indices(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(k, _)| k)
            .collect()
    }
}

pub(crate) fn is_binary(w: &[f64]) -> bool {
    w.iter().all(|&v| v == 0.0 || v == 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn diag_model(c: &[f64], noise_var: f64) -> Model {
        let n = c.len();
        Model::new(
            DMatrix::identity(n, n),
            n,
            1,
            DMatrix::from_diagonal(&DVector::from_column_slice(c)),
            DVector::zeros(n),
            noise_var,
        )
        .unwrap()
    }

    #[test]
    fn identity_model_is_valid() {
        let model = diag_model(&[1.0, 1.0], 1.0);
        assert_eq!((model.m(), model.d(), model.n()), (2, 1, 2));
        assert_eq!(model.prior_jitter(), 0.0);
    }

    #[test]
    fn indefinite_prior_rejected() {
        let err = Model::new(
            DMatrix::identity(2, 2),
            2,
            1,
            DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]),
            DVector::zeros(2),
            1.0,
        )
        .unwrap_err();
        assert_eq!(err, Error::NotSpd);
    }

    #[test]
    fn forward_rows_must_match_blocks() {
        let err = Model::new(
            DMatrix::zeros(3, 2),
            2,
            2,
            DMatrix::identity(2, 2),
            DVector::zeros(2),
            1.0,
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                what: "forward rows",
                expected: 4,
                found: 3
            }
        );
    }

    #[test]
    fn nonpositive_noise_rejected() {
        let err = Model::new(
            DMatrix::identity(2, 2),
            2,
            1,
            DMatrix::identity(2, 2),
            DVector::zeros(2),
            0.0,
        )
        .unwrap_err();
        assert_eq!(err, Error::NonPositiveNoise(0.0));
    }

    #[test]
    fn singular_prior_gets_one_jitter_pass() {
        let model = Model::new(
            DMatrix::identity(2, 2),
            2,
            1,
            DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]),
            DVector::zeros(2),
            1.0,
        )
        .unwrap();
        assert_relative_eq!(model.prior_jitter(), 1e-12);
    }

    #[test]
    fn kernels_for_diagonal_prior() {
        let kernels = diag_model(&[4.0, 1.0], 1.0).precompute();
        assert_eq!(kernels.k, DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0])));
        assert_eq!(kernels.l, DMatrix::from_diagonal(&DVector::from_vec(vec![16.0, 1.0])));
        assert_eq!(kernels.prior_trace, 5.0);
    }

    #[test]
    fn objective_closed_forms() {
        let id = diag_model(&[1.0, 1.0], 1.0);
        let kid = id.precompute();
        assert_eq!(id.objective(&kid, &[0.0, 0.0]).unwrap(), 2.0);
        assert_relative_eq!(id.objective(&kid, &[1.0, 0.0]).unwrap(), 1.5, epsilon = 1e-15);

        let dg = diag_model(&[4.0, 1.0], 1.0);
        let kdg = dg.precompute();
        let j = dg.objective(&kdg, &[0.875, 0.125]).unwrap();
        assert_relative_eq!(j, 16.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn gradient_closed_forms() {
        let id = diag_model(&[1.0, 1.0], 1.0);
        let g = id.gradient(&id.precompute(), &[0.0, 0.0]).unwrap();
        assert_relative_eq!(g[0], -1.0, epsilon = 1e-15);
        assert_relative_eq!(g[1], -1.0, epsilon = 1e-15);

        let dg = diag_model(&[4.0, 1.0], 1.0);
        let g = dg.gradient(&dg.precompute(), &[0.875, 0.125]).unwrap();
        let expected = -16.0 / (4.5 * 4.5);
        assert_relative_eq!(g[0], expected, epsilon = 1e-14);
        assert_relative_eq!(g[1], -1.0 / (1.125 * 1.125), epsilon = 1e-14);
        assert_relative_eq!(g[0], g[1], epsilon = 1e-14);
    }

    #[test]
    fn hessian_apply_closed_form() {
        let id = diag_model(&[1.0, 1.0], 1.0);
        let kid = id.precompute();
        let hv = id.hessian_apply(&kid, &[0.0, 0.0], &[1.0, 0.0]).unwrap();
        assert_relative_eq!(hv[0], 2.0, epsilon = 1e-15);
        assert_eq!(hv[1], 0.0);
        let zero = id.hessian_apply(&kid, &[0.3, 0.6], &[0.0, 0.0]).unwrap();
        assert_eq!(zero, vec![0.0, 0.0]);
    }

    #[test]
    fn wrong_design_length_rejected() {
        let id = diag_model(&[1.0, 1.0], 1.0);
        let kid = id.precompute();
        assert!(matches!(
            id.objective(&kid, &[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            id.hessian_apply(&kid, &[0.0, 0.0], &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn posterior_mean_examples() {
        let id = diag_model(&[1.0, 1.0], 1.0);
        let mean = id.posterior_mean(&[1.0, 0.0], &[2.0, 5.0]).unwrap();
        assert_relative_eq!(mean[0], 1.0, epsilon = 1e-15);
        assert_eq!(mean[1], 0.0);
        let prior = id.posterior_mean(&[0.0, 0.0], &[2.0, 5.0]).unwrap();
        assert_eq!(prior, DVector::zeros(2));
    }

    #[test]
    fn dense_oracle_small_cases() {
        let id = diag_model(&[1.0, 1.0], 1.0);
        assert_relative_eq!(id.objective_dense_oracle(&[1.0, 1.0]).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(id.objective_dense_oracle(&[0.0, 0.0]).unwrap(), 2.0, epsilon = 1e-15);
        let dg = diag_model(&[4.0, 1.0], 1.0);
        assert_relative_eq!(
            dg.objective_dense_oracle(&[0.875, 0.125]).unwrap(),
            16.0 / 9.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn design_validation() {
        assert!(Design::new(vec![1.0, 1.0, 0.0], 2).is_ok());
        assert!(Design::new(vec![1.0, 1.0, 0.5], 2).is_err());
        assert!(Design::new(vec![1.2, 0.0], 2).is_err());
        assert!(Design::new(vec![0.5, 0.5], 0).is_err());
        let d = Design::from_active(4, &[0, 2]).unwrap();
        assert!(d.is_binary());
        assert_eq!(d.active_indices(), vec![0, 2]);
        assert_eq!(d.budget(), 2);
        assert!(!Design::new(vec![0.5, 0.5], 1).unwrap().is_binary());
    }
}
