//! Command implementations. Each command produces a `Report` holding
//! both the JSON document and the rendered table; `main` picks one
//! according to the output format. Every command is deterministic:
//! identical inputs produce byte-identical JSON.

use crate::fixture;
use crate::formats::SeriesFile;
use crate::report::{matrix_json, matrix_table, sig6, Format};
use crate::CliError;
use perturb_core::laurent::{invert_series_with_tol, LaurentSeries};
use perturb_core::linmodel::{
    self, EvalOrder, PerturbedDesign,
};
use perturb_core::numerics::{f_quantile, Matrix};
use perturb_core::{fa, pca};
use serde_json::json;

/// Rendered command output.
#[derive(Debug)]
pub struct Report {
    pub json: serde_json::Value,
    pub table: String,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format.resolve() {
            Format::Json | Format::Auto => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Table => self.table.clone(),
        }
    }
}

fn math(e: perturb_core::Error) -> CliError {
    CliError::math(e)
}

fn laurent_json(inv: &LaurentSeries) -> serde_json::Value {
    let s = inv.pole_order() as isize;
    let coeffs: Vec<serde_json::Value> = (-s..=inv.max_order())
        .map(|w| json!({"power": w, "matrix": matrix_json(&inv.coefficient(w))}))
        .collect();
    json!({"pole_order": inv.pole_order(), "coefficients": coeffs})
}

fn laurent_table(inv: &LaurentSeries, out: &mut String) {
    out.push_str(&format!("pole order: {}\n", inv.pole_order()));
    let s = inv.pole_order() as isize;
    for w in -s..=inv.max_order() {
        out.push_str(&format!("Y[{w}] =\n"));
        out.push_str(&matrix_table(&inv.coefficient(w), "  "));
    }
}

/// Invert a matrix series file as a Laurent series up to eps^order.
pub fn cmd_invert(
    series: &SeriesFile,
    order: usize,
    max_t: Option<usize>,
    rank_tol: f64,
) -> Result<Report, CliError> {
    let s = series.to_series()?;
    if s.rows() != s.cols() {
        return Err(CliError::Input(format!(
            "inversion needs a square series, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let max_t = max_t.unwrap_or_else(|| perturb_core::laurent::default_max_t(&s));
    let inv = invert_series_with_tol(&s, order, max_t, rank_tol).map_err(math)?;
    let mut table = String::new();
    laurent_table(&inv, &mut table);
    Ok(Report {
        json: json!({"command": "invert", "order": order, "result": laurent_json(&inv)}),
        table,
    })
}

fn build_design(series: &SeriesFile) -> Result<PerturbedDesign, CliError> {
    PerturbedDesign::new(series.to_matrices()?).map_err(math)
}

/// Regular-perturbation fit: beta/SSE series, optional eps estimate,
/// F and standard errors at the working eps, confidence threshold.
#[allow(clippy::too_many_arguments)]
pub fn cmd_fit(
    design_file: &SeriesFile,
    y: &Matrix,
    beta0: Option<&[f64]>,
    order: usize,
    eps: Option<f64>,
    estimate_eps: bool,
    alpha: f64,
) -> Result<Report, CliError> {
    let design = build_design(design_file)?;
    if !(0.0..1.0).contains(&alpha) || alpha <= 0.0 {
        return Err(CliError::Input(format!("alpha must be in (0, 1), got {alpha}")));
    }
    let fit = linmodel::fit(&design, y, beta0, order, if estimate_eps { None } else { eps })
        .map_err(|e| match e {
            perturb_core::Error::SingularPerturbation(s) => CliError::Math(format!(
                "the design is singularly perturbed (pole order {s}); rerun with --singular \
                 to get the generalized-inverse limits"
            )),
            other => math(other),
        })?;
    let eval_eps = eps.or(fit.epsilon_hat).unwrap_or(0.0);
    let f_at = fit
        .f_series
        .as_ref()
        .map(|c| c.iter().rev().fold(0.0, |acc, v| acc * eval_eps + v));
    let threshold = beta0
        .map(|_| {
            f_quantile(alpha, design.params(), design.observations() - design.params())
                .map_err(math)
        })
        .transpose()?;

    let mut table = String::new();
    table.push_str("beta series (one column per power of eps):\n");
    for (k, b) in fit.beta_series.iter().enumerate() {
        table.push_str(&format!("  beta[{k}] = ({})\n", row_list(b)));
    }
    table.push_str(&format!(
        "SSE series: {}\n",
        fit.sse_series.iter().map(|&v| sig6(v)).collect::<Vec<_>>().join(", ")
    ));
    if estimate_eps {
        if let Some(eh) = fit.epsilon_hat {
            table.push_str(&format!("epsilon_hat: {}\n", sig6(eh)));
        }
    }
    table.push_str(&format!("working eps: {}\n", sig6(eval_eps)));
    table.push_str(&format!(
        "standard errors: {}\n",
        fit.stderr.iter().map(|&v| sig6(v)).collect::<Vec<_>>().join(", ")
    ));
    if let Some(f) = f_at {
        table.push_str(&format!("F: {}\n", sig6(f)));
    }
    if let Some(t) = threshold {
        table.push_str(&format!(
            "confidence threshold F({}, {}; alpha={}): {}\n",
            design.params(),
            design.observations() - design.params(),
            alpha,
            sig6(t)
        ));
    }

    Ok(Report {
        json: json!({
            "command": "fit",
            "beta_series": fit.beta_series.iter().map(matrix_json).collect::<Vec<_>>(),
            "sse_series": fit.sse_series,
            "epsilon_hat": if estimate_eps { fit.epsilon_hat } else { None },
            "eps": eval_eps,
            "stderr": fit.stderr,
            "f_series": fit.f_series,
            "f": f_at,
            "confidence_threshold": threshold,
            "alpha": beta0.map(|_| alpha),
        }),
        table,
    })
}

/// Singular-perturbation fit: generalized-inverse limits.
pub fn cmd_fit_singular(
    design_file: &SeriesFile,
    y: &Matrix,
    beta0: Option<&[f64]>,
) -> Result<Report, CliError> {
    let design = build_design(design_file)?;
    let s = linmodel::fit_singular(&design, y, beta0).map_err(math)?;
    let mut table = String::new();
    table.push_str(&format!("rank(X0): {}\n", s.rank));
    table.push_str(&format!("nu (residual dof): {}\n", s.nu));
    table.push_str(&format!("beta_tilde: ({})\n", row_list(&s.beta_tilde)));
    table.push_str(&format!("SSE limit: {}\n", sig6(s.sse_limit)));
    table.push_str(&format!(
        "Maclaurin projector representation holds: {}\n",
        s.maclaurin_holds
    ));
    if let Some(f) = s.f_tilde {
        table.push_str(&format!("F_tilde: {}\n", sig6(f)));
    }
    table.push_str("D0* =\n");
    table.push_str(&matrix_table(&s.d0_star, "  "));
    Ok(Report {
        json: json!({
            "command": "fit-singular",
            "rank": s.rank,
            "nu": s.nu,
            "beta_tilde": matrix_json(&s.beta_tilde),
            "sse_limit": s.sse_limit,
            "maclaurin_holds": s.maclaurin_holds,
            "f_tilde": s.f_tilde,
            "b0_ginv": matrix_json(&s.b0_ginv),
            "d0_star": matrix_json(&s.d0_star),
        }),
        table,
    })
}

fn row_list(v: &Matrix) -> String {
    v.data().iter().map(|&x| sig6(x)).collect::<Vec<_>>().join(", ")
}

/// Principal-component expansion of the residual covariance series.
pub fn cmd_pca(
    design_file: &SeriesFile,
    y: &Matrix,
    order: usize,
) -> Result<Report, CliError> {
    let design = build_design(design_file)?;
    let cov = pca::covariance_series(&design, y, order.max(1)).map_err(math)?;
    let s0 = &cov.coefficients[0];
    let s1 = &cov.coefficients[1];
    let p = cov.dim();
    let mut pairs = Vec::new();
    for index in 0..p {
        let e = pca::eigen_pair_series(s0, s1, index).map_err(math)?;
        pairs.push(e);
    }
    let gap = if p == 2 {
        Some(pca::eigen_gap_2x2(s0, s1).map_err(math)?)
    } else {
        None
    };

    let mut table = String::new();
    for (k, c) in cov.coefficients.iter().enumerate().take(order + 1) {
        table.push_str(&format!("S[{k}] =\n"));
        table.push_str(&matrix_table(c, "  "));
    }
    if let Some((a, g1)) = gap {
        table.push_str(&format!("eigenvalue gap: {} + eps * {}\n", sig6(a), sig6(g1)));
    }
    for (i, e) in pairs.iter().enumerate() {
        table.push_str(&format!(
            "lambda[{i}]: {} + eps * {}\n",
            sig6(e.lambda0),
            sig6(e.lambda1)
        ));
        table.push_str(&format!("  d0: ({})\n", row_list(&e.d0)));
        table.push_str(&format!("  d1: ({})\n", row_list(&e.d1)));
    }
    Ok(Report {
        json: json!({
            "command": "pca",
            "covariance_series": cov.coefficients.iter().map(matrix_json).collect::<Vec<_>>(),
            "gap": gap.map(|(a, g1)| json!({"constant": a, "linear": g1})),
            "eigenpairs": pairs.iter().map(|e| json!({
                "lambda0": e.lambda0,
                "lambda1": e.lambda1,
                "d0": matrix_json(&e.d0),
                "d1": matrix_json(&e.d1),
            })).collect::<Vec<_>>(),
        }),
        table,
    })
}

/// Factor-analysis covariance expansion. The phi file carries the
/// series tail Phi_1, Phi_2, ... (Phi_0 = I is implicit).
pub fn cmd_fa(
    gamma: &Matrix,
    psi: &[f64],
    phi_tail: &SeriesFile,
    order: usize,
    sample_cov: Option<&Matrix>,
) -> Result<Report, CliError> {
    let model = fa::FaModel::new(gamma.clone(), psi.to_vec(), phi_tail.to_matrices()?)
        .map_err(math)?;
    let sigma = fa::sigma_series(&model, order).map_err(math)?;
    let inv = fa::sigma_inverse_series(&model, order).map_err(math)?;
    let logdet = fa::logdet_series(&model, order).map_err(math)?;
    let loglik = sample_cov
        .map(|s| fa::loglik_terms(&model, s, order).map_err(math))
        .transpose()?;

    let mut table = String::new();
    for (k, c) in sigma.coefficients.iter().enumerate() {
        table.push_str(&format!("Sigma[{k}] =\n"));
        table.push_str(&matrix_table(c, "  "));
    }
    for k in 0..=order as isize {
        table.push_str(&format!("SigmaInv[{k}] =\n"));
        table.push_str(&matrix_table(&inv.coefficient(k), "  "));
    }
    table.push_str(&format!(
        "logdet series: {}\n",
        logdet.coefficients.iter().map(|&v| sig6(v)).collect::<Vec<_>>().join(", ")
    ));
    if let Some(ll) = &loglik {
        table.push_str(&format!(
            "loglik series: {}\n",
            ll.iter().map(|&v| sig6(v)).collect::<Vec<_>>().join(", ")
        ));
    }
    Ok(Report {
        json: json!({
            "command": "fa",
            "sigma_series": sigma.coefficients.iter().map(matrix_json).collect::<Vec<_>>(),
            "sigma_inverse_series": (0..=order as isize)
                .map(|k| matrix_json(&inv.coefficient(k)))
                .collect::<Vec<_>>(),
            "logdet_series": logdet.coefficients,
            "loglik_series": loglik,
        }),
        table,
    })
}

/// One data set's worth of reproduction output.
struct SetReport {
    epsilon_hat: f64,
    at_eps: [f64; 7],
    at_zero: [f64; 7],
}

/// The inference columns (theta0, se0, theta1, se1, theta2, se2, F)
/// at a given eps, with beta and C truncated to first order and SSE to
/// second.
fn inference_row(
    design: &PerturbedDesign,
    y: &Matrix,
    eps: f64,
) -> Result<[f64; 7], CliError> {
    let betas = linmodel::beta_series(design, y, 1).map_err(math)?;
    let theta: Vec<f64> = (0..3)
        .map(|j| betas[0][(j, 0)] + eps * betas[1][(j, 0)])
        .collect();
    let se = linmodel::standard_errors(design, y, eps, EvalOrder::Series(1)).map_err(math)?;
    let f = linmodel::f_statistic(design, y, &[1.0, 1.0, 1.0], eps, EvalOrder::Series(1))
        .map_err(math)?;
    Ok([theta[0], se[0], theta[1], se[1], theta[2], se[2], f])
}

fn reproduce_sets() -> Result<Vec<SetReport>, CliError> {
    let design = fixture::design();
    let mut out = Vec::new();
    for set in 0..fixture::SETS {
        let y = fixture::response(set);
        let eh = linmodel::epsilon_hat(&design, &y).map_err(math)?;
        out.push(SetReport {
            epsilon_hat: eh,
            at_eps: inference_row(&design, &y, eh)?,
            at_zero: inference_row(&design, &y, 0.0)?,
        });
    }
    Ok(out)
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Recompute the embedded dataset's full analysis and print it side by
/// side with the published reference values.
pub fn cmd_reproduce_gallant() -> Result<Report, CliError> {
    let design = fixture::design();
    let exp = linmodel::expand_gram(&design, 2).map_err(math)?;
    let sets = reproduce_sets()?;

    let ref_mats: [(&str, &[[f64; 3]; 3], Matrix); 6] = [
        ("B0", &fixture::reference::B0, exp.b_series.coefficient(0)),
        ("C0", &fixture::reference::C0, exp.c_series.coefficient(0)),
        ("B1", &fixture::reference::B1, exp.b_series.coefficient(1)),
        ("C1", &fixture::reference::C1, exp.c_series.coefficient(1)),
        ("B2", &fixture::reference::B2, exp.b_series.coefficient(2)),
        ("C2", &fixture::reference::C2, exp.c_series.coefficient(2)),
    ];

    let mut table = String::new();
    let mut json_mats = Vec::new();
    table.push_str("Gram and inverse series coefficients (computed vs reference):\n");
    for (name, reference, computed) in &ref_mats {
        let flat_ref: Vec<f64> = reference.iter().flatten().copied().collect();
        let dev = max_dev(computed.data(), &flat_ref);
        table.push_str(&format!("{name} (max deviation {}):\n", sig6(dev)));
        table.push_str(&matrix_table(computed, "  "));
        json_mats.push(json!({
            "name": name,
            "computed": matrix_json(computed),
            "reference": reference.iter().map(|r| json!(r.to_vec())).collect::<Vec<_>>(),
            "max_deviation": dev,
        }));
    }

    let labels = ["theta0", "se0", "theta1", "se1", "theta2", "se2", "F"];
    let mut json_sets = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        let ref_eh = fixture::reference::EPSILON_HAT[i];
        table.push_str(&format!(
            "data set {}: epsilon_hat {} (reference {}, deviation {})\n",
            i + 1,
            sig6(s.epsilon_hat),
            sig6(ref_eh),
            sig6((s.epsilon_hat - ref_eh).abs())
        ));
        let at_eps_ref = &fixture::reference::AT_EPSILON_HAT[i];
        let at_zero_ref = &fixture::reference::AT_ZERO[i];
        table.push_str(&format!(
            "  at eps_hat: computed ({}) reference ({}) max deviation {}\n",
            list7(&s.at_eps),
            list7(at_eps_ref),
            sig6(max_dev(&s.at_eps, at_eps_ref))
        ));
        table.push_str(&format!(
            "  at eps = 0: computed ({}) reference ({}) max deviation {}\n",
            list7(&s.at_zero),
            list7(at_zero_ref),
            sig6(max_dev(&s.at_zero, at_zero_ref))
        ));
        json_sets.push(json!({
            "set": i + 1,
            "epsilon_hat": s.epsilon_hat,
            "epsilon_hat_reference": ref_eh,
            "columns": labels,
            "at_epsilon_hat": s.at_eps.to_vec(),
            "at_epsilon_hat_reference": at_eps_ref.to_vec(),
            "at_zero": s.at_zero.to_vec(),
            "at_zero_reference": at_zero_ref.to_vec(),
            "at_zero_max_deviation": max_dev(&s.at_zero, at_zero_ref),
            "at_epsilon_hat_max_deviation": max_dev(&s.at_eps, at_eps_ref),
        }));
    }

    let json = json!({
        "command": "reproduce-gallant",
        "matrices": json_mats,
        "data_sets": json_sets,
    });
    // The table run carries the machine-readable document as well.
    let mut table_with_json = table;
    table_with_json.push_str("\nmachine-readable:\n");
    table_with_json.push_str(&serde_json::to_string_pretty(&json).expect("serializable"));
    table_with_json.push('\n');
    Ok(Report { json, table: table_with_json })
}

fn list7(v: &[f64; 7]) -> String {
    v.iter().map(|&x| sig6(x)).collect::<Vec<_>>().join(", ")
}
