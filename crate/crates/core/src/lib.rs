//! Inversion of analytically perturbed matrices as Laurent series, and
//! its use in perturbation-aware linear regression, principal-component
//! expansion, and factor-analysis covariance expansion.
//!
//! A matrix function A(eps) = A0 + eps A1 + eps^2 A2 + ... with A0
//! singular can still be invertible for small eps != 0; the inverse is
//! then a Laurent series with a pole at the origin. The [`laurent`]
//! module detects the pole order and produces the coefficients; the
//! [`linmodel`], [`pca`] and [`fa`] modules apply the expansion to
//! least-squares inference, principal components and factor-analysis
//! covariance structures. [`oracle`] provides slow exact checks used by
//! the test suites.

pub mod error;
pub mod fa;
pub mod laurent;
pub mod linmodel;
pub mod numerics;
pub mod oracle;
pub mod pca;

pub use error::{Error, Result};
