//! Minimal dense symmetric-matrix helpers (row-major `Vec<f64>` storage).

/// Lower-triangular Cholesky factor of a symmetric matrix, or `None` if a
/// pivot falls below the positive-definiteness tolerance.
///
/// The tolerance is scaled to the matrix dimension so that correlation
/// matrices with eigenvalues at or below machine-epsilon level are rejected
/// rather than factored into garbage.
pub(crate) fn cholesky_lower(dim: usize, a: &[f64]) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), dim * dim);
    let mut max_diag = 0.0_f64;
    for i in 0..dim {
        max_diag = max_diag.max(a[i * dim + i].abs());
    }
    let tol = dim as f64 * f64::EPSILON * max_diag.max(f64::MIN_POSITIVE);
    let mut l = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut s = a[i * dim + j];
            for k in 0..j {
                s -= l[i * dim + k] * l[j * dim + k];
            }
            if i == j {
                if s <= tol {
                    return None;
                }
                l[i * dim + i] = s.sqrt();
            } else {
                l[i * dim + j] = s / l[j * dim + j];
            }
        }
    }
    Some(l)
}

/// Solve L y = b with L lower triangular (forward substitution).
pub(crate) fn forward_solve(dim: usize, l: &[f64], b: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; dim];
    for i in 0..dim {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * dim + k] * y[k];
        }
        y[i] = s / l[i * dim + i];
    }
    y
}
