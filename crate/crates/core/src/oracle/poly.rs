//! Exact univariate polynomials over the rationals.

use crate::numerics::Rational;
use num_traits::{One, Zero};

/// Polynomial with rational coefficients, lowest degree first.
/// Normalized: no trailing zero coefficients (the zero polynomial is
/// the empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![Rational::one()] }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of eps^k (zero outside the stored range).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Order of the lowest nonzero coefficient; None for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divide by eps^v (requires valuation >= v).
    pub fn shift_down(&self, v: usize) -> RatPoly {
        assert!(self.valuation().map_or(true, |val| val >= v));
        RatPoly::from_coeffs(self.coeffs.iter().skip(v).cloned().collect())
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }

    /// Exact division; panics if the remainder is nonzero (the callers
    /// divide only where exactness is guaranteed by construction).
    pub fn div_exact(&self, divisor: &RatPoly) -> RatPoly {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.coeffs.last().unwrap().clone();
        assert!(rem.len() >= divisor.coeffs.len(), "inexact polynomial division");
        let qd = rem.len() - divisor.coeffs.len();
        let mut q = vec![Rational::zero(); qd + 1];
        for k in (0..=qd).rev() {
            let c = &rem[k + dd] / &lead;
            q[k] = c.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let sub = &c * d;
                rem[k + j] -= sub;
            }
        }
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        RatPoly::from_coeffs(q)
    }

    /// First `terms` coefficients of the reciprocal power series;
    /// requires a nonzero constant term.
    pub fn reciprocal_series(&self, terms: usize) -> Vec<Rational> {
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "reciprocal needs a unit constant term");
        let mut r = vec![c0.recip()];
        for k in 1..terms {
            let mut acc = Rational::zero();
            for i in 1..=k {
                acc += self.coeff(i) * &r[k - i];
            }
            r.push(-acc / &c0);
        }
        r
    }
}
