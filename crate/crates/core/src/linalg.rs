use nalgebra::{Cholesky, DMatrix, Dyn};

pub(crate) type Chol = Cholesky<f64, Dyn>;

/// Cholesky factorization with one deterministic retry: on failure, add
/// `1e-12 * tr(A) / n` to the diagonal and try again. Returns the factor and the
/// jitter actually applied.
pub(crate) fn cholesky_with_jitter(a: &DMatrix<f64>) -> Option<(Chol, f64)> {
    if let Some(chol) = Cholesky::new(a.clone()) {
        return Some((chol, 0.0));
    }
    let n = a.nrows().max(1) as f64;
    let jitter = 1e-12 * a.trace() / n;
    if jitter.is_nan() || jitter <= 0.0 {
        return None;
    }
    let mut shifted = a.clone();
    for i in 0..a.nrows() {
        shifted[(i, i)] += jitter;
    }
    Cholesky::new(shifted).map(|chol| (chol, jitter))
}

pub(crate) fn is_symmetric(a: &DMatrix<f64>, rel_tol: f64) -> bool {
    if !a.is_square() {
        return false;
    }
    let scale = a.amax();
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (a[(i, j)] - a[(j, i)]).abs() > rel_tol * scale {
                return false;
            }
        }
    }
    true
}

pub(crate) fn symmetrize(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
}

/// `sum_i a_ii` over the diagonal of the `d x d` block `(k, k)`.
pub(crate) fn block_trace(a: &DMatrix<f64>, k: usize, d: usize) -> f64 {
    (k * d..(k + 1) * d).map(|i| a[(i, i)]).sum()
}
