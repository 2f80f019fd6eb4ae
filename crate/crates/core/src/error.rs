use thiserror::Error;

/// Errors raised by the perturbation library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix entries must be finite")]
    NonFiniteEntry,

    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite (pivot {0:e} at row {1})")]
    NotPositiveDefinite(f64, usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no pole found up to t = {0}; A(eps) may be identically singular")]
    NoPoleFound(usize),

    #[error("determinant is identically zero")]
    IdenticallySingular,

    #[error("singular perturbation (pole order {0}); use the singular fit path")]
    SingularPerturbation(usize),

    #[error("negative-power residue {0:e} exceeds tolerance; series breakdown")]
    NegativePowerResidue(f64),

    #[error("SSE(eps) is flat to second order; eps is unidentifiable")]
    DegenerateEpsilon,

    #[error("eigenvalue gap {0:e} below tolerance; first-order expansion undefined")]
    DegenerateEigenvalue(f64),

    #[error("SSE(eps) nonpositive at eps = {0}; outside the validity disc")]
    InvalidEpsilon(f64),

    #[error("Gram matrix condition number {0:e} exceeds validity-disc limit at eps = {1}")]
    IllConditioned(f64, f64),

    #[error("no interior minimum found in the bracket")]
    NoInteriorMinimum,
}

pub type Result<T> = std::result::Result<T, Error>;
