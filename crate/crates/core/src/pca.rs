//! Perturbed principal components: covariance series from the
//! projector expansion, the closed-form 2x2 eigenvalue-gap expansion,
//! and first-order eigenpair series.

use crate::error::{Error, Result};
use crate::linmodel::{projection_series, PerturbedDesign};
use crate::numerics::{pinv, sym_eigen, Matrix};

/// Coefficients S_0, S_1, ... of the covariance expansion, all p x p
/// symmetric.
#[derive(Debug, Clone)]
pub struct CovarianceSeries {
    pub coefficients: Vec<Matrix>,
}

impl CovarianceSeries {
    pub fn new(coefficients: Vec<Matrix>) -> Result<Self> {
        let first = coefficients
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty covariance series".into()))?;
        let p = first.rows();
        if coefficients
            .iter()
            .any(|c| c.rows() != p || c.cols() != p)
        {
            return Err(Error::DimensionMismatch(
                "covariance coefficients must be square and share dimension".into(),
            ));
        }
        for c in &coefficients {
            let scale = c.max_abs().max(1.0);
            if c.asymmetry() > 1e-10 * scale {
                return Err(Error::NotSymmetric(c.asymmetry()));
            }
        }
        Ok(Self { coefficients })
    }

    pub fn dim(&self) -> usize {
        self.coefficients[0].rows()
    }

    pub fn evaluate(&self, eps: f64) -> Matrix {
        let p = self.dim();
        let mut acc = Matrix::zeros(p, p);
        for c in self.coefficients.iter().rev() {
            acc = &acc.scale(eps) + c;
        }
        acc
    }
}

/// S_k = Y^T P_k Y from the design's projector expansion.
pub fn covariance_series(
    design: &PerturbedDesign,
    y: &Matrix,
    order: usize,
) -> Result<CovarianceSeries> {
    if y.rows() != design.observations() {
        return Err(Error::DimensionMismatch(format!(
            "observation matrix must have {} rows, got {}",
            design.observations(),
            y.rows()
        )));
    }
    let ps = projection_series(design, order)?;
    let yt = y.transpose();
    let coefficients: Result<Vec<Matrix>> = ps
        .iter()
        .map(|p| yt.matmul(p)?.matmul(y))
        .collect();
    CovarianceSeries::new(symmetrize_all(coefficients?))
}

fn symmetrize_all(mats: Vec<Matrix>) -> Vec<Matrix> {
    // Y^T P Y is symmetric up to rounding; average to keep the
    // CovarianceSeries invariant exact.
    mats.into_iter()
        .map(|m| (&m + &m.transpose()).scale(0.5))
        .collect()
}

/// Closed-form p = 2 gap expansion:
/// lambda1 - lambda2 ~ A + eps * [(s111-s122)(s011-s022) + 4 s012 s112] / A
/// with A = sqrt((s011-s022)^2 + 4 s012^2).
pub fn eigen_gap_2x2(s0: &Matrix, s1: &Matrix) -> Result<(f64, f64)> {
    if s0.rows() != 2 || s0.cols() != 2 || s1.rows() != 2 || s1.cols() != 2 {
        return Err(Error::DimensionMismatch("eigen_gap_2x2 needs 2x2 inputs".into()));
    }
    let d0 = s0[(0, 0)] - s0[(1, 1)];
    let d1 = s1[(0, 0)] - s1[(1, 1)];
    let a = (d0 * d0 + 4.0 * s0[(0, 1)] * s0[(0, 1)]).sqrt();
    let tol = 1e-8 * s0.max_abs().max(1.0);
    if a <= tol {
        return Err(Error::DegenerateEigenvalue(a));
    }
    let gap1 = (d1 * d0 + 4.0 * s0[(0, 1)] * s1[(0, 1)]) / a;
    Ok((a, gap1))
}

/// First-order expansion of one eigenpair: lambda(eps) ~ lambda0 +
/// eps lambda1, d(eps) ~ d0 + eps d1 with the orthogonality gauge
/// d0^T d1 = 0.
#[derive(Debug, Clone)]
pub struct EigenExpansion {
    pub lambda0: f64,
    pub lambda1: f64,
    pub d0: Matrix,
    pub d1: Matrix,
}

/// Eigenpair series for the `index`-th eigenvalue (descending order) of
/// S0 under the perturbation S0 + eps S1. Requires the eigenvalue to be
/// simple.
pub fn eigen_pair_series(s0: &Matrix, s1: &Matrix, index: usize) -> Result<EigenExpansion> {
    if (s0.rows(), s0.cols()) != (s1.rows(), s1.cols()) || !s0.is_square() {
        return Err(Error::DimensionMismatch("eigen_pair_series shape mismatch".into()));
    }
    let p = s0.rows();
    if index >= p {
        return Err(Error::Domain(format!("eigenpair index {index} out of range")));
    }
    let eig = sym_eigen(s0)?;
    let lambda0 = eig.values[index];
    let tol = 1e-8 * s0.max_abs().max(1.0);
    let gap = eig
        .values
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != index)
        .map(|(_, &v)| (v - lambda0).abs())
        .fold(f64::INFINITY, f64::min);
    if gap <= tol {
        return Err(Error::DegenerateEigenvalue(gap));
    }
    let d0 = Matrix::col_vec(&eig.vectors.column(index));
    // Left-multiplying the first-order equation by d0^T forces
    // lambda1 = d0^T S1 d0.
    let lambda1 = s1.quad_form(&d0)?;
    // (S0 - lambda0 I) d1 = (lambda1 I - S1) d0; the rhs is orthogonal
    // to d0, and the pseudoinverse solve yields the minimum-norm
    // solution, which is exactly the d0^T d1 = 0 gauge.
    let shifted = s0 - &Matrix::identity(p).scale(lambda0);
    let rhs = &d0.scale(lambda1) - &s1.matmul(&d0)?;
    let d1 = pinv(&shifted, tol).matmul(&rhs)?;
    Ok(EigenExpansion { lambda0, lambda1, d0, d1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::sym_eigen;

    #[test]
    fn gap_trivial_diagonal() {
        let (a, g1) = eigen_gap_2x2(&Matrix::diag(&[3.0, 1.0]), &Matrix::zeros(2, 2)).unwrap();
        assert!((a - 2.0).abs() < 1e-12);
        assert!(g1.abs() < 1e-12);
    }

    #[test]
    fn gap_diagonal_perturbation() {
        // Exact eigenvalues 3 + eps and 1 - eps.
        let (a, g1) = eigen_gap_2x2(&Matrix::diag(&[3.0, 1.0]), &Matrix::diag(&[1.0, -1.0])).unwrap();
        assert!((a - 2.0).abs() < 1e-12);
        assert!((g1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gap_shared_eigenvectors() {
        // S0 = [[2,1],[1,2]], S1 = [[0,1],[1,0]]: eigenvalues 3 + eps, 1 - eps.
        let s0 = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let s1 = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let (a, g1) = eigen_gap_2x2(&s0, &s1).unwrap();
        assert!((a - 2.0).abs() < 1e-12);
        assert!((g1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gap_degenerate_rejected() {
        let s0 = Matrix::identity(2);
        let s1 = Matrix::diag(&[1.0, -1.0]);
        assert!(matches!(
            eigen_gap_2x2(&s0, &s1),
            Err(Error::DegenerateEigenvalue(_))
        ));
    }

    #[test]
    fn pair_zero_perturbation() {
        let s0 = Matrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = eigen_pair_series(&s0, &Matrix::zeros(2, 2), 0).unwrap();
        assert!(e.lambda1.abs() < 1e-12);
        assert!(e.d1.max_abs() < 1e-12);
    }

    #[test]
    fn pair_shared_eigenvectors() {
        let s0 = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let s1 = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = eigen_pair_series(&s0, &s1, 0).unwrap();
        assert!((e.lambda0 - 3.0).abs() < 1e-10);
        assert!((e.lambda1 - 1.0).abs() < 1e-10);
        assert!(e.d1.max_abs() < 1e-10);
    }

    #[test]
    fn trace_identity_first_order() {
        let s0 = Matrix::from_rows(&[vec![5.0, 1.5], vec![1.5, 2.0]]).unwrap();
        let s1 = Matrix::from_rows(&[vec![0.7, -0.3], vec![-0.3, 1.2]]).unwrap();
        let top = eigen_pair_series(&s0, &s1, 0).unwrap();
        let bot = eigen_pair_series(&s0, &s1, 1).unwrap();
        assert!((top.lambda0 + bot.lambda0 - s0.trace()).abs() < 1e-10);
        assert!((top.lambda1 + bot.lambda1 - s1.trace()).abs() < 1e-10);
        // Gap consistency with the closed form.
        let (a, g1) = eigen_gap_2x2(&s0, &s1).unwrap();
        assert!((top.lambda0 - bot.lambda0 - a).abs() < 1e-9);
        assert!((top.lambda1 - bot.lambda1 - g1).abs() < 1e-9);
    }

    #[test]
    fn first_order_residual_decay() {
        let s0 = Matrix::from_rows(&[
            vec![6.0, 1.0, 0.5],
            vec![1.0, 3.0, -0.4],
            vec![0.5, -0.4, 1.0],
        ])
        .unwrap();
        let s1 = Matrix::from_rows(&[
            vec![0.2, 0.8, -0.1],
            vec![0.8, -0.5, 0.3],
            vec![-0.1, 0.3, 0.9],
        ])
        .unwrap();
        let e = eigen_pair_series(&s0, &s1, 0).unwrap();
        let mut prev = f64::INFINITY;
        for &eps in &[1e-2, 1e-3] {
            let m = &s0 + &s1.scale(eps);
            let exact = sym_eigen(&m).unwrap().values[0];
            let err = (e.lambda0 + eps * e.lambda1 - exact).abs();
            let d = &e.d0 + &e.d1.scale(eps);
            let resid = (&m.matmul(&d).unwrap() - &d.scale(e.lambda0 + eps * e.lambda1)).max_abs();
            if prev.is_finite() {
                assert!(prev / err > 30.0, "eigenvalue ratio {}", prev / err);
            }
            assert!(resid < 10.0 * eps * eps, "residual {resid} at eps {eps}");
            prev = err;
        }
    }
}
