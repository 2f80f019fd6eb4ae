//! Perturbation-aware linear-model estimation and inference.
//!
//! The model is Y = X^T(eps) beta + noise with a known polynomial
//! design series X(eps) = X0 + eps X1 + ... (each component m x n,
//! parameters by observations). Everything downstream -- the
//! coefficient estimate, the residual sum of squares, the F statistic
//! and the confidence set -- is expanded in powers of eps via the
//! Laurent machinery, with direct (non-series) evaluation available for
//! cross-checking.

use crate::error::{Error, Result};
use crate::laurent::{invert_series, AnalyticMatrixSeries, LaurentSeries};
use crate::numerics::{f_quantile, numeric_rank, pinv, solve_spd, Matrix, Svd};

/// Condition-number limit for direct evaluation; past this the series
/// has left its validity disc.
const COND_LIMIT: f64 = 1e12;

/// Residue tolerance when collapsing the projector product to a
/// Maclaurin series.
const MACLAURIN_TOL: f64 = 1e-8;

/// Design components X0, X1, ... of X(eps), each m x n with n > m.
#[derive(Debug, Clone)]
pub struct PerturbedDesign {
    components: Vec<Matrix>,
    m: usize,
    n: usize,
}

impl PerturbedDesign {
    pub fn new(components: Vec<Matrix>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::DimensionMismatch("design needs at least X0".into()))?;
        let (m, n) = (first.rows(), first.cols());
        if components.iter().any(|c| (c.rows(), c.cols()) != (m, n)) {
            return Err(Error::DimensionMismatch(
                "design components must share dimensions".into(),
            ));
        }
        if m < 1 || n <= m {
            return Err(Error::DimensionMismatch(format!(
                "need n > m >= 1, got m = {m}, n = {n}"
            )));
        }
        Ok(Self { components, m, n })
    }

    pub fn params(&self) -> usize {
        self.m
    }

    pub fn observations(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    /// X(eps) as a polynomial matrix series.
    pub fn x_series(&self) -> AnalyticMatrixSeries {
        AnalyticMatrixSeries::new(self.components.clone()).expect("validated on construction")
    }

    pub fn x_at(&self, eps: f64) -> Matrix {
        self.x_series().evaluate(eps)
    }

    /// Exact Gram polynomial B(eps) = X(eps) X^T(eps), degree 2T.
    pub fn gram_series(&self) -> AnalyticMatrixSeries {
        let t = self.components.len() - 1;
        let mut coeffs = Vec::with_capacity(2 * t + 1);
        for k in 0..=(2 * t) {
            let mut bk = Matrix::zeros(self.m, self.m);
            for i in 0..=k {
                let j = k - i;
                if i > t || j > t {
                    continue;
                }
                bk = &bk + &(&self.components[i] * &self.components[j].transpose());
            }
            coeffs.push(bk);
        }
        AnalyticMatrixSeries::new(coeffs).expect("nonempty")
    }
}

/// Gram series B(eps) with its inverse expansion C(eps).
pub struct RegressionExpansion {
    pub b_series: AnalyticMatrixSeries,
    pub c_series: LaurentSeries,
}

impl RegressionExpansion {
    pub fn pole_order(&self) -> usize {
        self.c_series.pole_order()
    }
}

/// Expand the Gram matrix and its inverse to the requested order.
pub fn expand_gram(design: &PerturbedDesign, order: usize) -> Result<RegressionExpansion> {
    let b_series = design.gram_series();
    let max_t = (2 * design.params()).max(2);
    let c_series = invert_series(&b_series, order, max_t)?;
    Ok(RegressionExpansion { b_series, c_series })
}

/// Coefficients of the estimate series: term k is
/// sum_{i+j=k} C_i X_j Y. Regular perturbations only.
pub fn beta_series(design: &PerturbedDesign, y: &Matrix, order: usize) -> Result<Vec<Matrix>> {
    check_response(design, y)?;
    let exp = expand_gram(design, order)?;
    if exp.pole_order() > 0 {
        return Err(Error::SingularPerturbation(exp.pole_order()));
    }
    let xy = poly_times_vec(&design.x_series(), y)?;
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order as isize {
        let mut term = Matrix::zeros(design.params(), 1);
        for i in 0..=k {
            term = &term + &exp.c_series.coefficient(i).matmul(&xy.coefficient((k - i) as usize))?;
        }
        out.push(term);
    }
    Ok(out)
}

/// X(eps) * y as a vector polynomial series.
fn poly_times_vec(x: &AnalyticMatrixSeries, y: &Matrix) -> Result<AnalyticMatrixSeries> {
    let coeffs: Result<Vec<Matrix>> = x.coefficients().iter().map(|c| c.matmul(y)).collect();
    AnalyticMatrixSeries::new(coeffs?)
}

fn check_response(design: &PerturbedDesign, y: &Matrix) -> Result<()> {
    if y.rows() != design.observations() || y.cols() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "response must be {}x1, got {}x{}",
            design.observations(),
            y.rows(),
            y.cols()
        )));
    }
    Ok(())
}

/// Maclaurin coefficients P_0 .. P_K of the projector
/// P(eps) = I - X^T(eps) B^{-1}(eps) X(eps). Works for regular and
/// singular perturbations; the negative powers of the product must
/// cancel (Maclaurin representation of the projector) and are asserted
/// to do so.
pub fn projection_series(design: &PerturbedDesign, order: usize) -> Result<Vec<Matrix>> {
    let exp = expand_gram(design, order)?;
    projection_from_expansion(design, &exp, order)
}

fn projection_from_expansion(
    design: &PerturbedDesign,
    exp: &RegressionExpansion,
    order: usize,
) -> Result<Vec<Matrix>> {
    let x = LaurentSeries::from_polynomial(&design.x_series());
    let xt = LaurentSeries::from_polynomial(
        &AnalyticMatrixSeries::new(
            design
                .components()
                .iter()
                .map(Matrix::transpose)
                .collect(),
        )
        .expect("nonempty"),
    );
    let hat = xt.multiply(&exp.c_series)?.multiply(&x)?;
    let residue = hat.negative_part_norm();
    let scale = design
        .components()
        .iter()
        .map(Matrix::max_abs)
        .fold(1.0, f64::max);
    if residue > MACLAURIN_TOL * scale * scale {
        return Err(Error::NegativePowerResidue(residue));
    }
    let n = design.observations();
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order as isize {
        let mut pk = -&hat.coefficient(k);
        if k == 0 {
            pk = &pk + &Matrix::identity(n);
        }
        out.push(pk);
    }
    Ok(out)
}

/// Coefficients of SSE(eps): term k is Y^T P_k Y.
pub fn sse_series(design: &PerturbedDesign, y: &Matrix, order: usize) -> Result<Vec<f64>> {
    check_response(design, y)?;
    let ps = projection_series(design, order)?;
    ps.iter().map(|p| p.quad_form(y)).collect()
}

/// Closed-form estimate of the perturbation magnitude: the ratio form
/// eps_hat = s1 / (2 s2) built from the quadratic truncation
/// SSE(eps) = s0 + s1 eps + s2 eps^2. The stationary point of that
/// quadratic is the negative of this value; the ratio form is the
/// published convention and is what the reference tables use, so it is
/// kept as the reported estimate. `stationary_epsilon` gives the
/// literal stationary point.
pub fn epsilon_hat(design: &PerturbedDesign, y: &Matrix) -> Result<f64> {
    stationary_epsilon(design, y).map(|e| -e)
}

/// Stationary point -s1 / (2 s2) of the quadratic truncation of
/// SSE(eps); errors when the quadratic coefficient is negligible (flat
/// SSE, eps unidentifiable).
pub fn stationary_epsilon(design: &PerturbedDesign, y: &Matrix) -> Result<f64> {
    let sse = sse_series(design, y, 2)?;
    let scale = sse[0].abs().max(1.0);
    if sse[2].abs() < 1e-12 * scale {
        return Err(Error::DegenerateEpsilon);
    }
    Ok(-sse[1] / (2.0 * sse[2]))
}

/// Direct (non-series) least squares at a fixed eps, guarded by the
/// Gram condition number.
pub struct DirectFit {
    pub beta: Matrix,
    pub sse: f64,
    pub gram: Matrix,
}

pub fn direct_fit(design: &PerturbedDesign, y: &Matrix, eps: f64) -> Result<DirectFit> {
    check_response(design, y)?;
    let x = design.x_at(eps);
    let gram = &x * &x.transpose();
    let svd = Svd::compute(&gram);
    let smax = svd.singular_values[0];
    let smin = *svd.singular_values.last().unwrap();
    if smin <= 0.0 || smax / smin > COND_LIMIT {
        return Err(Error::IllConditioned(
            if smin > 0.0 { smax / smin } else { f64::INFINITY },
            eps,
        ));
    }
    let beta = solve_spd(&gram, &x.matmul(y)?)?;
    let fitted = x.transpose().matmul(&beta)?;
    let resid = y - &fitted;
    let sse = resid.transpose().matmul(&resid)?.scalar();
    Ok(DirectFit { beta, sse, gram })
}

/// Evaluation mode for F statistics and standard errors: direct
/// evaluation at eps, or the series truncated at a given order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalOrder {
    Exact,
    Series(usize),
}

/// Scalar series of the F numerator quadratic form
/// (beta_hat(eps) - beta0)^T B(eps) (beta_hat(eps) - beta0).
fn f_numerator_series(
    design: &PerturbedDesign,
    y: &Matrix,
    beta0: &Matrix,
    order: usize,
) -> Result<Vec<f64>> {
    let betas = beta_series(design, y, order)?;
    let mut delta_coeffs = betas;
    delta_coeffs[0] = &delta_coeffs[0] - beta0;
    let delta = AnalyticMatrixSeries::new(delta_coeffs)?;
    let delta_t = AnalyticMatrixSeries::new(
        delta.coefficients().iter().map(Matrix::transpose).collect(),
    )?;
    let b = design.gram_series();
    let prod = LaurentSeries::from_polynomial(&delta_t)
        .multiply(&LaurentSeries::from_polynomial(&b))?
        .multiply(&LaurentSeries::from_polynomial(&delta))?;
    Ok((0..=order as isize)
        .map(|k| prod.coefficient(k).scalar())
        .collect())
}

/// Reciprocal power series of a scalar series with nonzero constant
/// term.
fn reciprocal_series(p: &[f64], order: usize) -> Result<Vec<f64>> {
    if p.is_empty() || p[0] == 0.0 {
        return Err(Error::Domain("reciprocal of series with zero constant term".into()));
    }
    let mut r = vec![1.0 / p[0]];
    for k in 1..=order {
        let mut acc = 0.0;
        for i in 1..=k {
            let pi = p.get(i).copied().unwrap_or(0.0);
            acc += pi * r[k - i];
        }
        r.push(-acc / p[0]);
    }
    Ok(r)
}

/// Coefficients of the F(eps) expansion for testing beta = beta0.
pub fn f_series(
    design: &PerturbedDesign,
    y: &Matrix,
    beta0: &[f64],
    order: usize,
) -> Result<Vec<f64>> {
    let m = design.params();
    let n = design.observations();
    if beta0.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "beta0 has {} entries for {m} parameters",
            beta0.len()
        )));
    }
    let b0 = Matrix::col_vec(beta0);
    let num = f_numerator_series(design, y, &b0, order)?;
    let sse = sse_series(design, y, order)?;
    if sse[0] <= 0.0 {
        return Err(Error::InvalidEpsilon(0.0));
    }
    let recip = reciprocal_series(&sse, order)?;
    let scale = (n - m) as f64 / m as f64;
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = 0.0;
        for i in 0..=k {
            acc += num[i] * recip[k - i];
        }
        out.push(scale * acc);
    }
    Ok(out)
}

/// F statistic for H0: beta = beta0 at the given eps.
pub fn f_statistic(
    design: &PerturbedDesign,
    y: &Matrix,
    beta0: &[f64],
    eps: f64,
    order: EvalOrder,
) -> Result<f64> {
    let m = design.params();
    let n = design.observations();
    match order {
        EvalOrder::Exact => {
            let fit = direct_fit(design, y, eps)?;
            if fit.sse <= 0.0 {
                return Err(Error::InvalidEpsilon(eps));
            }
            let delta = &fit.beta - &Matrix::col_vec(beta0);
            let num = fit.gram.quad_form(&delta)? / m as f64;
            Ok(num / (fit.sse / (n - m) as f64))
        }
        EvalOrder::Series(k) => {
            let coeffs = f_series(design, y, beta0, k)?;
            Ok(eval_scalar_series(&coeffs, eps))
        }
    }
}

fn eval_scalar_series(coeffs: &[f64], eps: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * eps + c)
}

/// Standard errors sqrt(sigma2_hat * diag C(eps)), with sigma2_hat from
/// the SSE series and C(eps) summed to the same order.
pub fn standard_errors(
    design: &PerturbedDesign,
    y: &Matrix,
    eps: f64,
    order: EvalOrder,
) -> Result<Vec<f64>> {
    let m = design.params();
    let n = design.observations();
    let (sse, c) = match order {
        EvalOrder::Exact => {
            let fit = direct_fit(design, y, eps)?;
            (fit.sse, pinv(&fit.gram, 0.0))
        }
        EvalOrder::Series(k) => {
            let sse = eval_scalar_series(&sse_series(design, y, k)?, eps);
            let exp = expand_gram(design, k)?;
            if exp.pole_order() > 0 {
                return Err(Error::SingularPerturbation(exp.pole_order()));
            }
            (sse, exp.c_series.evaluate_regular_part(eps, k))
        }
    };
    if sse < 0.0 {
        return Err(Error::InvalidEpsilon(eps));
    }
    let sigma2 = sse / (n - m) as f64;
    Ok((0..m).map(|i| (sigma2 * c[(i, i)]).max(0.0).sqrt()).collect())
}

/// Truncated series for beta, SSE and F plus the closed-form eps
/// estimate; the one-stop summary for a regular perturbation.
pub struct FitResult {
    pub beta_series: Vec<Matrix>,
    pub sse_series: Vec<f64>,
    pub f_series: Option<Vec<f64>>,
    pub epsilon_hat: Option<f64>,
    pub sigma2_hat: Option<f64>,
    pub stderr: Vec<f64>,
}

/// Fit at a chosen eps (or the estimated one when `eps` is None).
pub fn fit(
    design: &PerturbedDesign,
    y: &Matrix,
    beta0: Option<&[f64]>,
    order: usize,
    eps: Option<f64>,
) -> Result<FitResult> {
    let beta_series_v = beta_series(design, y, order)?;
    let sse_series_v = sse_series(design, y, order.max(2))?;
    let eps_hat = match eps {
        Some(_) => epsilon_hat(design, y).ok(),
        None => Some(epsilon_hat(design, y)?),
    };
    let eval_eps = eps.or(eps_hat).unwrap_or(0.0);
    let f = match beta0 {
        Some(b0) => Some(f_series(design, y, b0, order.max(1))?),
        None => None,
    };
    let sigma2 = {
        let sse_at = eval_scalar_series(&sse_series_v[..=order.min(sse_series_v.len() - 1)], eval_eps);
        if sse_at > 0.0 {
            Some(sse_at / (design.observations() - design.params()) as f64)
        } else {
            None
        }
    };
    let stderr = standard_errors(design, y, eval_eps, EvalOrder::Series(order))?;
    Ok(FitResult {
        beta_series: beta_series_v,
        sse_series: sse_series_v,
        f_series: f,
        epsilon_hat: eps_hat,
        sigma2_hat: sigma2,
        stderr,
    })
}

/// Limits of the singular-perturbation fit (B0 = X0 X0^T singular).
pub struct SingularFit {
    pub b0_ginv: Matrix,
    pub beta_tilde: Matrix,
    pub rank: usize,
    pub nu: usize,
    pub sse_limit: f64,
    pub d0_star: Matrix,
    pub f_tilde: Option<f64>,
    /// Whether the Maclaurin representation X0 = B0 B0^+ X0 holds.
    pub maclaurin_holds: bool,
}

/// Singular-case fit with the Moore-Penrose inverse as the generalized
/// inverse: beta_tilde = B0^+ X0 Y, D0* = I - X0^T B0^+ X0,
/// nu = n - rank(X0).
pub fn fit_singular(
    design: &PerturbedDesign,
    y: &Matrix,
    beta0: Option<&[f64]>,
) -> Result<SingularFit> {
    check_response(design, y)?;
    let x0 = &design.components()[0];
    let b0 = x0 * &x0.transpose();
    let b0_ginv = pinv(&b0, 0.0);
    let beta_tilde = b0_ginv.matmul(&x0.matmul(y)?)?;
    let r = numeric_rank(x0, 0.0);
    let n = design.observations();
    let m = design.params();
    let nu = n - r;
    let d0_star = &Matrix::identity(n) - &(&x0.transpose() * &(&b0_ginv * x0));
    let sse_limit = d0_star.quad_form(y)?;
    let f_tilde = match beta0 {
        Some(b0v) => {
            if sse_limit <= 0.0 {
                None
            } else {
                let delta = &beta_tilde - &Matrix::col_vec(b0v);
                let num = b0.quad_form(&delta)? / m as f64;
                Some(num / (sse_limit / (n - m) as f64))
            }
        }
        None => None,
    };
    let replay = &(&b0 * &b0_ginv) * x0;
    let maclaurin_holds = (&replay - x0).max_abs() <= 1e-8 * x0.max_abs().max(1.0);
    Ok(SingularFit {
        b0_ginv,
        beta_tilde,
        rank: r,
        nu,
        sse_limit,
        d0_star,
        f_tilde,
        maclaurin_holds,
    })
}

/// Confidence-set evaluation: membership via F(eps) <= F_{alpha; m, n-m}.
pub struct ConfidenceSetEval {
    design: PerturbedDesign,
    y: Matrix,
    pub alpha: f64,
    pub threshold: f64,
    eps: f64,
    order: EvalOrder,
}

pub fn confidence_set(
    design: &PerturbedDesign,
    y: &Matrix,
    alpha: f64,
    eps: f64,
    order: EvalOrder,
) -> Result<ConfidenceSetEval> {
    check_response(design, y)?;
    let threshold = f_quantile(alpha, design.params(), design.observations() - design.params())?;
    Ok(ConfidenceSetEval {
        design: design.clone(),
        y: y.clone(),
        alpha,
        threshold,
        eps,
        order,
    })
}

impl ConfidenceSetEval {
    pub fn f_value_at(&self, beta: &[f64]) -> Result<f64> {
        f_statistic(&self.design, &self.y, beta, self.eps, self.order)
    }

    pub fn contains(&self, beta: &[f64]) -> Result<bool> {
        Ok(self.f_value_at(beta)? <= self.threshold)
    }
}
