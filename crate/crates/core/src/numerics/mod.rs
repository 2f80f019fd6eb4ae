//! Self-contained dense real-matrix arithmetic and the special
//! functions the rest of the library builds on.

mod chol;
mod eigen;
mod fdist;
mod matrix;
mod rational;
mod svd;

pub use chol::{cholesky, logdet_spd, solve_spd};
pub use eigen::{sym_eigen, SymEigen};
pub use fdist::{f_cdf, f_quantile, inc_beta};
pub use matrix::Matrix;
pub use rational::{rat, rational_to_f64, Rational, RationalMatrix};
pub use svd::{default_tol, numeric_rank, pinv, Svd};

/// Rank tolerance override (decimal string), consulted by the CLI.
pub const RANK_TOL_ENV: &str = "PERTURB_RANK_TOL";
