//! Cholesky factorization and SPD solves.

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "cholesky on {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m[(i, j)];
            for k in 0..j {
                sum -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::NotPositiveDefinite(sum, i));
                }
                l[(i, j)] = sum.sqrt();
            } else {
                l[(i, j)] = sum / l[(j, j)];
            }
        }
    }
    Ok(l)
}

/// Solve m x = rhs for symmetric positive definite m (rhs may have
/// multiple columns).
pub fn solve_spd(m: &Matrix, rhs: &Matrix) -> Result<Matrix> {
    if m.rows() != rhs.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve_spd: {}x{} vs rhs {}x{}",
            m.rows(),
            m.cols(),
            rhs.rows(),
            rhs.cols()
        )));
    }
    let l = cholesky(m)?;
    let n = m.rows();
    let k = rhs.cols();
    let mut x = rhs.clone();
    // Forward substitution L y = rhs.
    for c in 0..k {
        for i in 0..n {
            let mut sum = x[(i, c)];
            for j in 0..i {
                sum -= l[(i, j)] * x[(j, c)];
            }
            x[(i, c)] = sum / l[(i, i)];
        }
        // Back substitution L^T x = y.
        for i in (0..n).rev() {
            let mut sum = x[(i, c)];
            for j in (i + 1)..n {
                sum -= l[(j, i)] * x[(j, c)];
            }
            x[(i, c)] = sum / l[(i, i)];
        }
    }
    Ok(x)
}

/// log(det M) for symmetric positive definite M.
pub fn logdet_spd(m: &Matrix) -> Result<f64> {
    let l = cholesky(m)?;
    Ok((0..m.rows()).map(|i| l[(i, i)].ln()).sum::<f64>() * 2.0)
}
