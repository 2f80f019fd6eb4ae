//! Singular value decomposition by one-sided (Hestenes) Jacobi
//! orthogonalization, plus the Moore-Penrose pseudoinverse and
//! numerical rank built on it.

use super::matrix::Matrix;

const MAX_SWEEPS: usize = 60;

/// Thin SVD of an m x n matrix: singular values (descending) together
/// with the matching left and right singular vectors, stored as columns
/// of `u` (m x p) and `v` (n x p), p = min(m, n).
pub struct Svd {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    pub fn compute(m: &Matrix) -> Svd {
        if m.rows() >= m.cols() {
            jacobi_tall(m)
        } else {
            // A = U S V^T  <=>  A^T = V S U^T
            let s = jacobi_tall(&m.transpose());
            Svd {
                u: s.v,
                singular_values: s.singular_values,
                v: s.u,
            }
        }
    }
}

/// One-sided Jacobi on a tall (m >= n) matrix: rotate column pairs of a
/// working copy until all pairs are numerically orthogonal, accumulating
/// the rotations in V. Column norms of the converged copy are the
/// singular values.
fn jacobi_tall(a: &Matrix) -> Svd {
    let m = a.rows();
    let n = a.cols();
    debug_assert!(m >= n);
    let mut w = a.clone();
    let mut v = Matrix::identity(n);

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma += wp * wq;
                }
                if gamma.abs() <= 1e-30 + f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rutishauser rotation annihilating the (p,q) inner product.
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    w[(i, p)] = c * wp - s * wq;
                    w[(i, q)] = s * wp + c * wq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w[(i, j)] * w[(i, j)]).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());

    let mut u = Matrix::zeros(m, n);
    let mut vs = Matrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        if s > 0.0 {
            for i in 0..m {
                u[(i, k)] = w[(i, j)] / s;
            }
        }
        for i in 0..n {
            vs[(i, k)] = v[(i, j)];
        }
    }
    Svd {
        u,
        singular_values: sigma,
        v: vs,
    }
}

/// Default rank tolerance: max(rows, cols) * machine epsilon * sigma_max.
pub fn default_tol(m: &Matrix, sigma_max: f64) -> f64 {
    m.rows().max(m.cols()) as f64 * f64::EPSILON * sigma_max
}

fn effective_tol(m: &Matrix, svd: &Svd, tol: f64) -> f64 {
    if tol > 0.0 {
        tol
    } else {
        default_tol(m, svd.singular_values.first().copied().unwrap_or(0.0))
    }
}

/// Moore-Penrose pseudoinverse. Singular values at or below `tol` are
/// treated as zero; `tol = 0` selects the default tolerance.
pub fn pinv(m: &Matrix, tol: f64) -> Matrix {
    let svd = Svd::compute(m);
    let tol = effective_tol(m, &svd, tol);
    let mut out = Matrix::zeros(m.cols(), m.rows());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= tol {
            continue;
        }
        let inv = 1.0 / s;
        for i in 0..m.cols() {
            let vik = svd.v[(i, k)] * inv;
            if vik == 0.0 {
                continue;
            }
            for j in 0..m.rows() {
                out[(i, j)] += vik * svd.u[(j, k)];
            }
        }
    }
    out
}

/// Number of singular values exceeding `tol` (default tolerance when 0).
pub fn numeric_rank(m: &Matrix, tol: f64) -> usize {
    let svd = Svd::compute(m);
    let tol = effective_tol(m, &svd, tol);
    svd.singular_values.iter().filter(|&&s| s > tol).count()
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::numerics::Matrix;
    use proptest::prelude::*;

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-10.0f64..10.0, rows * cols)
            .prop_map(move |data| Matrix::new(rows, cols, data).unwrap())
    }

    proptest! {
        #[test]
        fn penrose_conditions_hold(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| arb_matrix(r, c))) {
            let p = pinv(&m, 0.0);
            let scale = m.max_abs().max(1.0);
            prop_assert!((&(&(&m * &p) * &m) - &m).max_abs() < 1e-8 * scale);
            prop_assert!((&(&(&p * &m) * &p) - &p).max_abs() < 1e-8 * scale);
            prop_assert!((&m * &p).asymmetry() < 1e-8 * scale);
            prop_assert!((&p * &m).asymmetry() < 1e-8 * scale);
        }

        #[test]
        fn rank_invariant_under_transpose(m in arb_matrix(3, 5)) {
            prop_assert_eq!(numeric_rank(&m, 0.0), numeric_rank(&m.transpose(), 0.0));
        }

        #[test]
        fn singular_values_sorted_and_nonnegative(m in arb_matrix(4, 3)) {
            let svd = Svd::compute(&m);
            for w in svd.singular_values.windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
            prop_assert!(svd.singular_values.iter().all(|&s| s >= 0.0));
        }
    }
}
