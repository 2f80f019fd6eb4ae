//! Perturbed factor-analysis covariance structure:
//! Sigma(eps) = Gamma Phi(eps) Gamma^T + Psi with Phi(eps) = I + eps
//! Phi_1 + ..., and the expansions of Sigma(eps)^{-1} and
//! ln det Sigma(eps).

use crate::error::{Error, Result};
use crate::laurent::{invert_series, AnalyticMatrixSeries, LaurentSeries};
use crate::numerics::{logdet_spd, Matrix};
use crate::pca::CovarianceSeries;

/// Factor model: p x k loadings, positive residual variances, and the
/// latent covariance series Phi(eps) with Phi_0 = I.
#[derive(Debug, Clone)]
pub struct FaModel {
    loadings: Matrix,
    residual_variances: Vec<f64>,
    phi_series: Vec<Matrix>,
}

impl FaModel {
    /// `phi_tail` holds Phi_1, Phi_2, ...; Phi_0 = I is implicit.
    pub fn new(loadings: Matrix, residual_variances: Vec<f64>, phi_tail: Vec<Matrix>) -> Result<Self> {
        let p = loadings.rows();
        let k = loadings.cols();
        if residual_variances.len() != p {
            return Err(Error::DimensionMismatch(format!(
                "{} residual variances for {p} variables",
                residual_variances.len()
            )));
        }
        if residual_variances.iter().any(|&v| v <= 0.0) {
            return Err(Error::Domain("residual variances must be positive".into()));
        }
        for phi in &phi_tail {
            if phi.rows() != k || phi.cols() != k {
                return Err(Error::DimensionMismatch(format!(
                    "Phi coefficients must be {k}x{k}"
                )));
            }
            if phi.asymmetry() > 1e-10 * phi.max_abs().max(1.0) {
                return Err(Error::NotSymmetric(phi.asymmetry()));
            }
        }
        let mut phi_series = vec![Matrix::identity(k)];
        phi_series.extend(phi_tail);
        Ok(Self { loadings, residual_variances, phi_series })
    }

    pub fn vars(&self) -> usize {
        self.loadings.rows()
    }

    pub fn factors(&self) -> usize {
        self.loadings.cols()
    }
}

/// Sigma_0 = Gamma Gamma^T + Psi; Sigma_k = Gamma Phi_k Gamma^T for
/// k >= 1.
pub fn sigma_series(model: &FaModel, order: usize) -> Result<CovarianceSeries> {
    let gamma = &model.loadings;
    let gamma_t = gamma.transpose();
    let last = (order).max(model.phi_series.len() - 1);
    let mut coeffs = Vec::with_capacity(last + 1);
    for k in 0..=last {
        let phi_k = model.phi_series.get(k);
        let mut sk = match phi_k {
            Some(phi) => gamma.matmul(phi)?.matmul(&gamma_t)?,
            None => Matrix::zeros(model.vars(), model.vars()),
        };
        if k == 0 {
            for (i, &psi) in model.residual_variances.iter().enumerate() {
                sk[(i, i)] += psi;
            }
        }
        // Keep coefficients exactly symmetric.
        sk = (&sk + &sk.transpose()).scale(0.5);
        coeffs.push(sk);
    }
    CovarianceSeries::new(coeffs)
}

/// Regular inversion of Sigma(eps); Sigma_0 is positive definite
/// because the residual variances are.
pub fn sigma_inverse_series(model: &FaModel, order: usize) -> Result<LaurentSeries> {
    let sigma = sigma_series(model, order)?;
    let poly = AnalyticMatrixSeries::new(sigma.coefficients)?;
    invert_series(&poly, order, 2)
}

/// Coefficients of ln det Sigma(eps).
#[derive(Debug, Clone)]
pub struct LogDetSeries {
    pub coefficients: Vec<f64>,
}

impl LogDetSeries {
    pub fn evaluate(&self, eps: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * eps + c)
    }
}

/// ln det Sigma(eps) by termwise integration of
/// tr(Sigma^{-1}(eps) Sigma'(eps)), which is d/d eps ln det Sigma(eps).
pub fn logdet_series(model: &FaModel, order: usize) -> Result<LogDetSeries> {
    let sigma = sigma_series(model, order)?;
    let c0 = logdet_spd(&sigma.coefficients[0])?;
    if order == 0 {
        return Ok(LogDetSeries { coefficients: vec![c0] });
    }
    let inv = sigma_inverse_series(model, order - 1)?;
    // Sigma'(eps) = sum_k k eps^{k-1} Sigma_k, a polynomial of degree
    // one less.
    let deriv_coeffs: Vec<Matrix> = sigma
        .coefficients
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, m)| m.scale(k as f64))
        .collect();
    let deriv = if deriv_coeffs.is_empty() {
        AnalyticMatrixSeries::constant(Matrix::zeros(model.vars(), model.vars()))
    } else {
        AnalyticMatrixSeries::new(deriv_coeffs)?
    };
    let prod = inv.multiply(&LaurentSeries::from_polynomial(&deriv))?;
    let mut coefficients = vec![c0];
    for j in 0..order {
        let t_j = prod.coefficient(j as isize).trace();
        coefficients.push(t_j / (j + 1) as f64);
    }
    Ok(LogDetSeries { coefficients })
}

/// eps-series of the log-likelihood kernel
/// -[ln det Sigma(eps) + tr(S Sigma^{-1}(eps))]. Evaluation only.
pub fn loglik_terms(model: &FaModel, sample_cov: &Matrix, order: usize) -> Result<Vec<f64>> {
    let p = model.vars();
    if sample_cov.rows() != p || sample_cov.cols() != p {
        return Err(Error::DimensionMismatch(format!(
            "sample covariance must be {p}x{p}"
        )));
    }
    if sample_cov.asymmetry() > 1e-8 * sample_cov.max_abs().max(1.0) {
        return Err(Error::NotSymmetric(sample_cov.asymmetry()));
    }
    let logdet = logdet_series(model, order)?;
    let inv = sigma_inverse_series(model, order)?;
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let tr = sample_cov.matmul(&inv.coefficient(k as isize))?.trace();
        out.push(-(logdet.coefficients[k] + tr));
    }
    Ok(out)
}
