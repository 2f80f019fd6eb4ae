//! Report rendering: 6-significant-digit tables for human reading,
//! full round-trip-precision JSON for machines.

use perturb_core::numerics::Matrix;

/// Output format; `Auto` resolves to `Table` on a terminal and `Json`
/// when output is redirected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Auto,
    Table,
    Json,
}

impl Format {
    pub fn resolve(self) -> Format {
        match self {
            Format::Auto => {
                use std::io::IsTerminal;
                if std::io::stdout().is_terminal() {
                    Format::Table
                } else {
                    Format::Json
                }
            }
            other => other,
        }
    }
}

/// Format a number with 6 significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..9).contains(&mag) {
        return format!("{x:.5e}");
    }
    // Round to 6 significant digits, then print with exactly the
    // decimals that reach the 6th digit.
    let scale = 10f64.powi(mag - 5);
    let x = (x / scale).round() * scale;
    let decimals = (5 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Trim trailing zeros but keep at least one digit after the point.
    if s.contains('.') {
        let t = s.trim_end_matches('0');
        let t = t.strip_suffix('.').unwrap_or(t);
        t.to_string()
    } else {
        s
    }
}

/// Render a matrix as aligned rows of 6-significant-digit numbers.
pub fn matrix_table(m: &Matrix, indent: &str) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|&v| sig6(v)).collect())
        .collect();
    let widths: Vec<usize> = (0..m.cols())
        .map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        out.push_str(indent);
        for (j, cell) in row.iter().enumerate() {
            if j > 0 {
                out.push_str("  ");
            }
            out.push_str(&format!("{cell:>width$}", width = widths[j]));
        }
        out.push('\n');
    }
    out
}

/// JSON value for a matrix: nested row arrays at full precision.
pub fn matrix_json(m: &Matrix) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.rows())
            .map(|i| serde_json::json!(m.row(i)))
            .collect(),
    )
}
