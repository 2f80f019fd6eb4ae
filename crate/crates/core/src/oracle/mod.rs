//! Independent verification engines: exact rational Laurent inversion
//! through the adjugate, pointwise residual sampling, and a
//! derivative-free minimizer of the exact SSE(eps) curve. Test and
//! acceptance machinery, not a production path.

mod adjugate;
mod poly;

pub use adjugate::{adjugate_laurent, RationalLaurentSeries, RationalPolyMatrix};
pub use poly::RatPoly;

use crate::error::{Error, Result};
use crate::laurent::{AnalyticMatrixSeries, LaurentSeries};
use crate::linmodel::PerturbedDesign;
use crate::numerics::{pinv, Matrix};

/// Max over the grid of the inverse-identity residual
/// ||A(eps) * candidate(eps) - I||_inf.
pub fn pointwise_residual(
    series: &AnalyticMatrixSeries,
    candidate: &LaurentSeries,
    eps_grid: &[f64],
) -> Result<f64> {
    let n = series.rows();
    let mut worst = 0.0f64;
    for &eps in eps_grid {
        let prod = series.evaluate(eps).matmul(&candidate.evaluate(eps))?;
        worst = worst.max((&prod - &Matrix::identity(n)).max_abs());
    }
    Ok(worst)
}

/// Exact SSE(eps) via the pseudoinverse projector; no series involved.
pub fn exact_sse(design: &PerturbedDesign, y: &Matrix, eps: f64) -> Result<f64> {
    let x = design.x_at(eps);
    let gram = &x * &x.transpose();
    let hat = &x.transpose() * &(&pinv(&gram, 0.0) * &x);
    let p = &Matrix::identity(design.observations()) - &hat;
    p.quad_form(y)
}

const GOLDEN_INV: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimizer of the exact SSE(eps) over a bracket,
/// to 1e-6 bracket width. Signals when the objective is flat or the
/// minimum sits on the boundary.
pub fn minimize_sse(design: &PerturbedDesign, y: &Matrix, bracket: (f64, f64)) -> Result<f64> {
    let (mut a, mut b) = bracket;
    if a >= b {
        return Err(Error::Domain("empty bracket".into()));
    }
    let f = |eps: f64| exact_sse(design, y, eps);
    let fa = f(a)?;
    let fb = f(b)?;

    let mut x1 = b - GOLDEN_INV * (b - a);
    let mut x2 = a + GOLDEN_INV * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > 1e-6 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN_INV * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN_INV * (b - a);
            f2 = f(x2)?;
        }
    }
    let xmin = 0.5 * (a + b);
    let fmin = f1.min(f2);
    // A flat objective or a boundary minimum has no interior drop from
    // either end of the original bracket.
    let drop = (fa - fmin).max(fb - fmin);
    let scale = fa.abs().max(fb.abs()).max(1e-30);
    if drop <= 1e-12 * scale {
        return Err(Error::NoInteriorMinimum);
    }
    if fa - fmin <= 1e-12 * scale || fb - fmin <= 1e-12 * scale {
        return Err(Error::NoInteriorMinimum);
    }
    Ok(xmin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::invert_series;

    fn worked_series() -> AnalyticMatrixSeries {
        AnalyticMatrixSeries::linear(
            Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap(),
            Matrix::from_rows(&[vec![-1.0, 1.0], vec![-2.0, -1.0]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn residual_decays_for_exact_candidate() {
        let series = worked_series();
        let inv = invert_series(&series, 3, 4).unwrap();
        let r_coarse = pointwise_residual(&series, &inv, &[1e-2]).unwrap();
        let r_fine = pointwise_residual(&series, &inv, &[1e-3]).unwrap();
        assert!(r_coarse / r_fine > 1e3, "ratio {}", r_coarse / r_fine);
    }

    #[test]
    fn residual_grows_when_truncated() {
        let series = worked_series();
        let full = invert_series(&series, 2, 4).unwrap();
        let short = invert_series(&series, 1, 4).unwrap();
        let eps = 1e-3;
        let r_full = pointwise_residual(&series, &full, &[eps]).unwrap();
        let r_short = pointwise_residual(&series, &short, &[eps]).unwrap();
        let factor = r_short / r_full;
        assert!(factor > 100.0, "factor {factor}");
    }

    #[test]
    fn residual_order_one_for_wrong_pole() {
        let series = worked_series();
        let inv = invert_series(&series, 1, 4).unwrap();
        // Discard the singular part: the candidate then misses the pole.
        let wrong = LaurentSeries::new(
            0,
            vec![inv.coefficient(0), inv.coefficient(1)],
        )
        .unwrap();
        let r = pointwise_residual(&series, &wrong, &[1e-3]).unwrap();
        assert!(r > 0.1, "residual {r}");
    }

    #[test]
    fn golden_section_finds_symmetric_minimum() {
        // SSE even in eps by construction: minimum at 0.
        let x0 = Matrix::from_rows(&[vec![1.0, 1.0, 1.0, 1.0]]).unwrap();
        let x1 = Matrix::from_rows(&[vec![-1.0, 1.0, -1.0, 1.0]]).unwrap();
        let d = PerturbedDesign::new(vec![x0, x1]).unwrap();
        let y = Matrix::col_vec(&[2.0, 2.0, 4.0, 4.0]);
        let eps = minimize_sse(&d, &y, (-0.4, 0.4)).unwrap();
        assert!(eps.abs() < 1e-5, "eps {eps}");
    }

    #[test]
    fn flat_objective_signals() {
        let x0 = Matrix::from_rows(&[
            vec![2.0, 2.0, 1.0, 1.0],
            vec![0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let x1 = Matrix::from_rows(&[
            vec![0.0, 0.0, 0.0, 0.0],
            vec![1.0, 1.0, 1.0, 1.0],
        ])
        .unwrap();
        let d = PerturbedDesign::new(vec![x0, x1]).unwrap();
        let y = Matrix::col_vec(&[3.0, 1.0, 2.0, 4.0]);
        assert!(matches!(
            minimize_sse(&d, &y, (0.1, 0.9)),
            Err(Error::NoInteriorMinimum)
        ));
    }
}
