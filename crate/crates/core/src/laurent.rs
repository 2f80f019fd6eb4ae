//! Laurent-series inversion of analytic (truncated-polynomial) square
//! matrix functions, with pole-order detection for singular
//! perturbations.
//!
//! A matrix function A(eps) = A0 + eps A1 + ... with A0 singular can
//! still be invertible in a punctured disc around 0; its inverse is
//! then a Laurent series with a finite-order pole. The pole order is
//! found from rank increments of block lower-triangular augmented
//! matrices, and the coefficients follow from the top block row of the
//! pseudoinverse of the augmented matrix at the pole order.

use crate::error::{Error, Result};
use crate::numerics::{numeric_rank, pinv, Matrix};

/// Finitely truncated matrix power series: coefficients A_0 .. A_T,
/// all the same shape. Evaluation is exact (the input is a polynomial);
/// coefficients beyond the truncation are zero by convention.
#[derive(Debug, Clone)]
pub struct AnalyticMatrixSeries {
    coefficients: Vec<Matrix>,
}

impl AnalyticMatrixSeries {
    pub fn new(coefficients: Vec<Matrix>) -> Result<Self> {
        let first = coefficients
            .first()
            .ok_or_else(|| Error::DimensionMismatch("series needs at least one coefficient".into()))?;
        let shape = (first.rows(), first.cols());
        if coefficients.iter().any(|c| (c.rows(), c.cols()) != shape) {
            return Err(Error::DimensionMismatch(
                "series coefficients must share dimensions".into(),
            ));
        }
        Ok(Self { coefficients })
    }

    /// Linear perturbation A + eps B.
    pub fn linear(a: Matrix, b: Matrix) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn constant(a: Matrix) -> Self {
        Self { coefficients: vec![a] }
    }

    pub fn rows(&self) -> usize {
        self.coefficients[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.coefficients[0].cols()
    }

    pub fn truncation_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Matrix] {
        &self.coefficients
    }

    /// A_k, zero beyond the truncation.
    pub fn coefficient(&self, k: usize) -> Matrix {
        self.coefficients
            .get(k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rows(), self.cols()))
    }

    pub fn evaluate(&self, eps: f64) -> Matrix {
        let mut acc = Matrix::zeros(self.rows(), self.cols());
        for coeff in self.coefficients.iter().rev() {
            acc = &acc.scale(eps) + coeff;
        }
        acc
    }
}

/// Laurent series sum_{k >= -s} eps^k Y_k. `coefficients[i]` holds the
/// coefficient of power i - pole_order. `exact` marks a finite
/// polynomial (all higher coefficients identically zero), as opposed to
/// a truncation valid only through the last stored power.
#[derive(Debug, Clone)]
pub struct LaurentSeries {
    pole_order: usize,
    coefficients: Vec<Matrix>,
    exact: bool,
}

impl LaurentSeries {
    pub fn new(pole_order: usize, coefficients: Vec<Matrix>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::DimensionMismatch("empty Laurent series".into()));
        }
        Ok(Self {
            pole_order,
            coefficients,
            exact: false,
        })
    }

    pub fn from_polynomial(series: &AnalyticMatrixSeries) -> Self {
        Self {
            pole_order: 0,
            coefficients: series.coefficients().to_vec(),
            exact: true,
        }
    }

    pub fn pole_order(&self) -> usize {
        self.pole_order
    }

    /// Highest stored power.
    pub fn max_order(&self) -> isize {
        self.coefficients.len() as isize - 1 - self.pole_order as isize
    }

    /// True when coefficients beyond the stored range are exactly zero.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn rows(&self) -> usize {
        self.coefficients[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.coefficients[0].cols()
    }

    /// Coefficient of eps^power; zero outside the stored range.
    pub fn coefficient(&self, power: isize) -> Matrix {
        let idx = power + self.pole_order as isize;
        if idx < 0 || idx >= self.coefficients.len() as isize {
            Matrix::zeros(self.rows(), self.cols())
        } else {
            self.coefficients[idx as usize].clone()
        }
    }

    pub fn coefficients(&self) -> &[Matrix] {
        &self.coefficients
    }

    pub fn evaluate(&self, eps: f64) -> Matrix {
        let mut acc = Matrix::zeros(self.rows(), self.cols());
        for coeff in self.coefficients.iter().rev() {
            acc = &acc.scale(eps) + coeff;
        }
        acc.scale(eps.powi(-(self.pole_order as i32)))
    }

    /// Sum of the stored nonnegative-power part at eps, truncated at
    /// `order`.
    pub fn evaluate_regular_part(&self, eps: f64, order: usize) -> Matrix {
        let mut acc = Matrix::zeros(self.rows(), self.cols());
        for k in (0..=order as isize).rev() {
            acc = &acc.scale(eps) + &self.coefficient(k);
        }
        acc
    }

    /// Largest max-abs norm among coefficients of negative powers.
    pub fn negative_part_norm(&self) -> f64 {
        (0..self.pole_order)
            .map(|i| self.coefficients[i].max_abs())
            .fold(0.0, f64::max)
    }

    /// Drop the negative powers, asserting they are numerically zero.
    pub fn into_maclaurin(self, tol: f64) -> Result<LaurentSeries> {
        let residue = self.negative_part_norm();
        if residue > tol {
            return Err(Error::NegativePowerResidue(residue));
        }
        Ok(LaurentSeries {
            pole_order: 0,
            coefficients: self.coefficients[self.pole_order..].to_vec(),
            exact: self.exact,
        })
    }

    /// Cauchy product, truncated at the smaller valid order.
    pub fn multiply(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "series product {}x{} * {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let s = self.pole_order + other.pole_order;
        // An exact factor does not limit the valid order of the product.
        let exact = self.exact && other.exact;
        let hi = match (self.exact, other.exact) {
            (true, true) => self.max_order() + other.max_order(),
            (true, false) => other.max_order() - self.pole_order as isize,
            (false, true) => self.max_order() - other.pole_order as isize,
            (false, false) => (self.max_order() - other.pole_order as isize)
                .min(other.max_order() - self.pole_order as isize),
        };
        let lo = -(s as isize);
        if hi < lo {
            return Err(Error::DimensionMismatch(
                "series product has no valid coefficients".into(),
            ));
        }
        let mut coefficients = Vec::with_capacity((hi - lo + 1) as usize);
        for w in lo..=hi {
            let mut acc = Matrix::zeros(self.rows(), other.cols());
            let u_min = (-(self.pole_order as isize)).max(w - other.max_order());
            let u_max = self.max_order().min(w + other.pole_order as isize);
            for u in u_min..=u_max {
                acc = &acc + &self.coefficient(u).matmul(&other.coefficient(w - u))?;
            }
            coefficients.push(acc);
        }
        Ok(LaurentSeries {
            pole_order: s,
            coefficients,
            exact,
        })
    }
}

/// Multiply two series; polynomial inputs convert via
/// [`LaurentSeries::from_polynomial`].
pub fn series_multiply(a: &LaurentSeries, b: &LaurentSeries) -> Result<LaurentSeries> {
    a.multiply(b)
}

/// The block lower-triangular augmented matrix for order t, with the
/// top block row of its pseudoinverse.
pub struct AugmentedSystem {
    pub t: usize,
    pub block: Matrix,
    /// G_00 .. G_0t from the pseudoinverse of `block`.
    pub top_row_blocks: Vec<Matrix>,
}

/// Stack A_0..A_t block lower-triangularly: A_0 on the diagonal, A_j on
/// the j-th subdiagonal.
pub fn build_augmented(series: &AnalyticMatrixSeries, t: usize) -> Result<Matrix> {
    if series.rows() != series.cols() {
        return Err(Error::DimensionMismatch(format!(
            "augmented matrix needs a square series, got {}x{}",
            series.rows(),
            series.cols()
        )));
    }
    let n = series.rows();
    let mut block = Matrix::zeros((t + 1) * n, (t + 1) * n);
    for bi in 0..=t {
        for bj in 0..=bi {
            let a = series.coefficient(bi - bj);
            for i in 0..n {
                for j in 0..n {
                    block[(bi * n + i, bj * n + j)] = a[(i, j)];
                }
            }
        }
    }
    Ok(block)
}

/// Augmented system plus pseudoinverse top-row blocks.
pub fn build_augmented_system(series: &AnalyticMatrixSeries, t: usize, tol: f64) -> Result<AugmentedSystem> {
    let block = build_augmented(series, t)?;
    let n = series.rows();
    let g = pinv(&block, tol);
    let mut top_row_blocks = Vec::with_capacity(t + 1);
    for bj in 0..=t {
        let mut sub = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                sub[(i, j)] = g[(i, bj * n + j)];
            }
        }
        top_row_blocks.push(sub);
    }
    Ok(AugmentedSystem { t, block, top_row_blocks })
}

/// Pole order of A(eps)^{-1}: the smallest t with
/// rank(aug(t)) = rank(aug(t-1)) + n. Returns 0 when A_0 is nonsingular.
pub fn pole_order(series: &AnalyticMatrixSeries, max_t: usize) -> Result<usize> {
    pole_order_with_tol(series, max_t, 0.0)
}

pub fn pole_order_with_tol(series: &AnalyticMatrixSeries, max_t: usize, tol: f64) -> Result<usize> {
    if series.rows() != series.cols() {
        return Err(Error::DimensionMismatch("pole order needs a square series".into()));
    }
    let n = series.rows();
    let mut prev_rank = numeric_rank(&build_augmented(series, 0)?, tol);
    if prev_rank == n {
        return Ok(0);
    }
    for t in 1..=max_t {
        let rank = numeric_rank(&build_augmented(series, t)?, tol);
        if rank == prev_rank + n {
            return Ok(t);
        }
        prev_rank = rank;
    }
    Err(Error::NoPoleFound(max_t))
}

/// Default pole-search cap: twice the dimension.
pub fn default_max_t(series: &AnalyticMatrixSeries) -> usize {
    (2 * series.rows()).max(1)
}

/// Invert A(eps) as a Laurent series carrying coefficients
/// Y_{-s} .. Y_K.
pub fn invert_series(series: &AnalyticMatrixSeries, order: usize, max_t: usize) -> Result<LaurentSeries> {
    invert_series_with_tol(series, order, max_t, 0.0)
}

pub fn invert_series_with_tol(
    series: &AnalyticMatrixSeries,
    order: usize,
    max_t: usize,
    tol: f64,
) -> Result<LaurentSeries> {
    let mut s = pole_order_with_tol(series, max_t, tol)?;
    loop {
        let result = solve_with_pole(series, s, order, tol)?;
        // Theorem-based detection can overshoot on near-singular input;
        // a vanishing leading coefficient means the pole is not tight.
        if s > 0 {
            let scale = series
                .coefficients()
                .iter()
                .map(Matrix::max_abs)
                .fold(1.0, f64::max);
            if result.coefficients[0].max_abs() <= 1e-10 * scale {
                s -= 1;
                continue;
            }
        }
        return Ok(result);
    }
}

fn solve_with_pole(
    series: &AnalyticMatrixSeries,
    s: usize,
    order: usize,
    tol: f64,
) -> Result<LaurentSeries> {
    let n = series.rows();
    let aug = build_augmented_system(series, s, tol)?;
    let g0 = &aug.top_row_blocks;

    // X_0 = G_{0s}; X_k from the recursion with the Kronecker term
    // delta_{j+k,s}. Relabel Y_{k-s} = X_k afterwards.
    let mut xs: Vec<Matrix> = vec![g0[s].clone()];
    for k in 1..=(s + order) {
        let mut xk = Matrix::zeros(n, n);
        for (j, g0j) in g0.iter().enumerate() {
            let mut bracket = if j + k == s {
                Matrix::identity(n)
            } else {
                Matrix::zeros(n, n)
            };
            for i in 1..=k {
                let a = series.coefficient(i + j);
                if a.max_abs() == 0.0 {
                    continue;
                }
                bracket = &bracket - &a.matmul(&xs[k - i])?;
            }
            xk = &xk + &g0j.matmul(&bracket)?;
        }
        xs.push(xk);
    }
    LaurentSeries::new(s, xs)
}
