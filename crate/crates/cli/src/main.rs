//! perturb-cli: Laurent-series inversion of perturbed matrices and the
//! regression/PCA/factor-analysis expansions built on it.

use clap::{Parser, Subcommand, ValueEnum};
use perturb_cli::commands;
use perturb_cli::formats::{parse_matrix_csv, parse_number_list, SeriesFile};
use perturb_cli::report::Format;
use perturb_cli::{rank_tol_from_env, CliError};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "perturb-cli", version, about = "Laurent-series inversion of analytically perturbed matrices, with regression, PCA and factor-analysis expansions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (defaults to table on a terminal, json otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Invert a matrix series file as a Laurent series.
    Invert {
        /// JSON series file {"rows", "cols", "coefficients": [...]}.
        #[arg(long)]
        series: PathBuf,
        /// Highest power of eps to carry in the inverse.
        #[arg(long)]
        order: usize,
        /// Cap on the pole-order search depth.
        #[arg(long)]
        max_t: Option<usize>,
    },
    /// Least-squares fit under a perturbed design.
    Fit {
        /// JSON series file with the design components X0, X1, ...
        #[arg(long)]
        design: PathBuf,
        /// Response vector as single-column CSV.
        #[arg(long)]
        y: PathBuf,
        /// Null-hypothesis coefficients (comma-separated) for F tests.
        #[arg(long)]
        beta0: Option<String>,
        /// Truncation order of the series.
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Evaluate at this eps.
        #[arg(long, conflicts_with = "estimate_eps")]
        eps: Option<f64>,
        /// Estimate eps from the SSE expansion and evaluate there.
        #[arg(long)]
        estimate_eps: bool,
        /// Confidence-set level.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Report the singular-perturbation (generalized-inverse) limits.
        #[arg(long)]
        singular: bool,
    },
    /// Principal-component expansion of the residual covariance.
    Pca {
        #[arg(long)]
        design: PathBuf,
        /// Observation matrix (n x p CSV).
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Factor-analysis covariance expansion.
    Fa {
        /// Loadings matrix (p x k CSV).
        #[arg(long)]
        gamma: PathBuf,
        /// Residual variances (comma-separated, all positive).
        #[arg(long)]
        psi: String,
        /// Series file with the factor-covariance tail Phi_1, Phi_2, ...
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        order: usize,
        /// Optional sample covariance (p x p CSV) for the log-likelihood series.
        #[arg(long)]
        sample_cov: Option<PathBuf>,
    },
    /// Recompute the embedded regression dataset's analysis against the
    /// published reference values.
    ReproduceGallant,
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<String, CliError> {
    let format = match cli.format {
        Some(FormatArg::Table) => Format::Table,
        Some(FormatArg::Json) => Format::Json,
        None => Format::Auto,
    };
    let report = match cli.command {
        Command::Invert { series, order, max_t } => {
            let doc = SeriesFile::parse(&read_file(&series)?)?;
            commands::cmd_invert(&doc, order, max_t, rank_tol_from_env()?)?
        }
        Command::Fit { design, y, beta0, order, eps, estimate_eps, alpha, singular } => {
            let doc = SeriesFile::parse(&read_file(&design)?)?;
            let yv = parse_matrix_csv(&read_file(&y)?)?;
            let b0 = beta0.as_deref().map(parse_number_list).transpose()?;
            if singular {
                commands::cmd_fit_singular(&doc, &yv, b0.as_deref())?
            } else {
                commands::cmd_fit(&doc, &yv, b0.as_deref(), order, eps, estimate_eps, alpha)?
            }
        }
        Command::Pca { design, y, order } => {
            let doc = SeriesFile::parse(&read_file(&design)?)?;
            let yv = parse_matrix_csv(&read_file(&y)?)?;
            commands::cmd_pca(&doc, &yv, order)?
        }
        Command::Fa { gamma, psi, phi, order, sample_cov } => {
            let g = parse_matrix_csv(&read_file(&gamma)?)?;
            let p = parse_number_list(&psi)?;
            let phi_doc = SeriesFile::parse(&read_file(&phi)?)?;
            let sc = sample_cov
                .map(|path| parse_matrix_csv(&read_file(&path)?))
                .transpose()?;
            commands::cmd_fa(&g, &p, &phi_doc, order, sc.as_ref())?
        }
        Command::ReproduceGallant => commands::cmd_reproduce_gallant()?,
    };
    Ok(report.render(format))
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => print!("{output}"),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
