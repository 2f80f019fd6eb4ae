//! Exact Laurent inversion through the adjugate: expand 1/det A(eps)
//! as a scalar power series and multiply by adj A(eps). Slow but
//! exact; this is the independent check for the pseudoinverse-based
//! inversion.

use super::poly::RatPoly;
use crate::error::{Error, Result};
use crate::laurent::LaurentSeries;
use crate::numerics::{Rational, RationalMatrix};
use num_traits::Zero;

/// Square matrix of rational polynomials in eps.
#[derive(Debug, Clone)]
pub struct RationalPolyMatrix {
    n: usize,
    entries: Vec<RatPoly>,
}

impl RationalPolyMatrix {
    /// Build from series coefficients A_0, A_1, ... (all square, same
    /// dimension).
    pub fn from_series(coefficients: &[RationalMatrix]) -> Result<Self> {
        let first = coefficients
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty rational series".into()))?;
        let n = first.rows();
        if first.cols() != n
            || coefficients.iter().any(|c| c.rows() != n || c.cols() != n)
        {
            return Err(Error::DimensionMismatch(
                "rational series coefficients must be square and uniform".into(),
            ));
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let coeffs: Vec<Rational> =
                    coefficients.iter().map(|a| a[(i, j)].clone()).collect();
                entries.push(RatPoly::from_coeffs(coeffs));
            }
        }
        Ok(Self { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn at(&self, i: usize, j: usize) -> &RatPoly {
        &self.entries[i * self.n + j]
    }

    /// Determinant by fraction-free (Bareiss) elimination over the
    /// polynomial ring, with row pivoting on zero polynomials.
    pub fn determinant(&self) -> RatPoly {
        let n = self.n;
        let mut a: Vec<Vec<RatPoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut sign = false;
        let mut prev = RatPoly::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = !sign;
                    }
                    None => return RatPoly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = num.div_exact(&prev);
                }
                a[i][k] = RatPoly::zero();
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if sign {
            det.neg()
        } else {
            det
        }
    }

    fn minor(&self, drop_row: usize, drop_col: usize) -> RationalPolyMatrix {
        let n = self.n - 1;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..self.n {
            if i == drop_row {
                continue;
            }
            for j in 0..self.n {
                if j == drop_col {
                    continue;
                }
                entries.push(self.at(i, j).clone());
            }
        }
        RationalPolyMatrix { n, entries }
    }

    /// Adjugate: adj(A)_{ij} = (-1)^{i+j} det(minor(j, i)).
    pub fn adjugate(&self) -> RationalPolyMatrix {
        let n = self.n;
        if n == 1 {
            return RationalPolyMatrix { n: 1, entries: vec![RatPoly::one()] };
        }
        let mut entries = vec![RatPoly::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let cof = self.minor(j, i).determinant();
                entries[i * n + j] = if (i + j) % 2 == 0 { cof } else { cof.neg() };
            }
        }
        RationalPolyMatrix { n, entries }
    }
}

/// Exact Laurent expansion of the inverse, coefficients in rational
/// arithmetic.
pub struct RationalLaurentSeries {
    pub pole_order: usize,
    /// Coefficients of powers -pole_order .. max stored power.
    pub coefficients: Vec<RationalMatrix>,
}

impl RationalLaurentSeries {
    /// Coefficient of eps^power, zero outside the stored range.
    pub fn coefficient(&self, power: isize) -> RationalMatrix {
        let n = self.coefficients[0].rows();
        let idx = power + self.pole_order as isize;
        if idx < 0 || idx >= self.coefficients.len() as isize {
            RationalMatrix::zeros(n, n)
        } else {
            self.coefficients[idx as usize].clone()
        }
    }

    pub fn max_order(&self) -> isize {
        self.coefficients.len() as isize - 1 - self.pole_order as isize
    }

    /// Float view for comparison against the numeric path.
    pub fn to_float(&self) -> LaurentSeries {
        LaurentSeries::new(
            self.pole_order,
            self.coefficients.iter().map(RationalMatrix::to_f64).collect(),
        )
        .expect("nonempty")
    }
}

/// Invert an exact rational matrix series as a Laurent series carrying
/// coefficients through eps^K. Errors when det A(eps) is identically
/// zero.
pub fn adjugate_laurent(
    coefficients: &[RationalMatrix],
    order: usize,
) -> Result<RationalLaurentSeries> {
    let poly = RationalPolyMatrix::from_series(coefficients)?;
    let n = poly.dim();
    let det = poly.determinant();
    if det.is_zero() {
        return Err(Error::IdenticallySingular);
    }
    let v = det.valuation().unwrap();
    let unit = det.shift_down(v);
    let adj = poly.adjugate();
    // Entry series: adj_{ij}(eps) * eps^{-v} * (1/unit)(eps); powers
    // from -v upward.
    let recip = unit.reciprocal_series(v + order + 1);
    let span = v + order + 1;
    let mut raw: Vec<RationalMatrix> = vec![RationalMatrix::zeros(n, n); span];
    for i in 0..n {
        for j in 0..n {
            let entry = adj.at(i, j);
            for (idx, slot) in raw.iter_mut().enumerate() {
                // Coefficient of eps^{idx - v}: sum_t entry_t * recip_{idx - t}.
                let mut acc = Rational::zero();
                for t in 0..=idx {
                    let e = entry.coeff(t);
                    if e.is_zero() {
                        continue;
                    }
                    acc += e * &recip[idx - t];
                }
                slot[(i, j)] = acc;
            }
        }
    }
    // Tighten the pole: drop leading zero coefficient matrices.
    let lead = raw.iter().position(|m| !m.is_zero()).unwrap_or(0);
    let coefficients: Vec<RationalMatrix> = raw.into_iter().skip(lead).collect();
    let pole_order = v.saturating_sub(lead);
    // Keep exactly pole_order + order + 1 coefficients (down to eps^K).
    let keep = pole_order + order + 1;
    let coefficients = coefficients.into_iter().take(keep).collect();
    Ok(RationalLaurentSeries { pole_order, coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn rm(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_i64(rows).unwrap()
    }

    /// The worked singular 2x2 linear perturbation.
    fn example_series() -> Vec<RationalMatrix> {
        vec![
            rm(&[vec![1, 1], vec![1, 1]]),
            rm(&[vec![-1, 1], vec![-2, -1]]),
        ]
    }

    #[test]
    fn example_determinant() {
        let poly = RationalPolyMatrix::from_series(&example_series()).unwrap();
        let det = poly.determinant();
        // det A(eps) = -eps(1 - 3 eps) = -eps + 3 eps^2.
        assert_eq!(det.coeff(0), rat(0, 1));
        assert_eq!(det.coeff(1), rat(-1, 1));
        assert_eq!(det.coeff(2), rat(3, 1));
    }

    #[test]
    fn example_laurent_coefficients() {
        let inv = adjugate_laurent(&example_series(), 1).unwrap();
        assert_eq!(inv.pole_order, 1);
        assert_eq!(inv.coefficient(-1), rm(&[vec![-1, 1], vec![1, -1]]));
        assert_eq!(inv.coefficient(0), rm(&[vec![-2, 4], vec![1, -2]]));
        assert_eq!(inv.coefficient(1), rm(&[vec![-6, 12], vec![3, -6]]));
    }

    #[test]
    fn identity_series() {
        let inv = adjugate_laurent(&[RationalMatrix::identity(3)], 2).unwrap();
        assert_eq!(inv.pole_order, 0);
        assert_eq!(inv.coefficient(0), RationalMatrix::identity(3));
        assert!(inv.coefficient(1).is_zero());
    }

    #[test]
    fn diagonal_reciprocal() {
        // diag(1, eps): Y_{-1} = diag(0,1), Y_0 = diag(1,0).
        let series = vec![rm(&[vec![1, 0], vec![0, 0]]), rm(&[vec![0, 0], vec![0, 1]])];
        let inv = adjugate_laurent(&series, 1).unwrap();
        assert_eq!(inv.pole_order, 1);
        assert_eq!(inv.coefficient(-1), rm(&[vec![0, 0], vec![0, 1]]));
        assert_eq!(inv.coefficient(0), rm(&[vec![1, 0], vec![0, 0]]));
        assert!(inv.coefficient(1).is_zero());
    }

    #[test]
    fn identically_singular_detected() {
        let series = vec![rm(&[vec![1, 1], vec![1, 1]]), rm(&[vec![2, 2], vec![2, 2]])];
        assert!(matches!(
            adjugate_laurent(&series, 1),
            Err(Error::IdenticallySingular)
        ));
    }
}
