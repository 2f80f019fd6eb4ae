//! Command-line front end for the perturbation-series library: file
//! ingestion, command dispatch, the embedded regression dataset, and
//! human/machine-readable reporting. Exit codes: 0 success, 1
//! input/parse error, 2 mathematical error (singularity, degeneracy,
//! domain).

pub mod commands;
pub mod fixture;
pub mod formats;
pub mod report;

/// CLI-level failure, carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input: bad file, bad flag value. Exit code 1.
    Input(String),
    /// The computation itself rejected the problem. Exit code 2.
    Math(String),
}

impl CliError {
    pub fn math(e: perturb_core::Error) -> CliError {
        CliError::Math(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Math(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Math(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Math(m) => write!(f, "math error: {m}"),
        }
    }
}

/// Numeric-rank tolerance override from PERTURB_RANK_TOL (decimal
/// string); 0.0 means "library default".
pub fn rank_tol_from_env() -> Result<f64, CliError> {
    match std::env::var(perturb_core::numerics::RANK_TOL_ENV) {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| {
                CliError::Input(format!(
                    "{} must be a non-negative decimal, got {s:?}",
                    perturb_core::numerics::RANK_TOL_ENV
                ))
            }),
        Err(_) => Ok(0.0),
    }
}
