//! File formats: matrix-series JSON documents and headerless CSV
//! matrices. Both are deliberately minimal; the CLI's contract is
//! purely linear-algebraic and the formats carry nothing but numbers
//! and shapes.

use crate::CliError;
use perturb_core::laurent::AnalyticMatrixSeries;
use perturb_core::numerics::Matrix;
use serde::{Deserialize, Serialize};

/// JSON document holding the coefficients of a matrix series:
/// `{"rows": r, "cols": c, "coefficients": [[row-major A_0], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesFile {
    pub rows: usize,
    pub cols: usize,
    pub coefficients: Vec<Vec<f64>>,
}

impl SeriesFile {
    pub fn parse(text: &str) -> Result<SeriesFile, CliError> {
        let doc: SeriesFile = serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!(
                "series file: {} (line {}, column {})",
                e,
                e.line(),
                e.column()
            ))
        })?;
        if doc.coefficients.is_empty() {
            return Err(CliError::Input(
                "series file needs at least one coefficient matrix".into(),
            ));
        }
        let want = doc.rows * doc.cols;
        if let Some((k, c)) = doc
            .coefficients
            .iter()
            .enumerate()
            .find(|(_, c)| c.len() != want)
        {
            return Err(CliError::Input(format!(
                "coefficient {k} has {} entries, expected {}x{} = {want}",
                c.len(),
                doc.rows,
                doc.cols
            )));
        }
        Ok(doc)
    }

    pub fn to_series(&self) -> Result<AnalyticMatrixSeries, CliError> {
        let mats: Result<Vec<Matrix>, _> = self
            .coefficients
            .iter()
            .map(|c| Matrix::new(self.rows, self.cols, c.clone()))
            .collect();
        AnalyticMatrixSeries::new(mats.map_err(CliError::math)?).map_err(CliError::math)
    }

    pub fn to_matrices(&self) -> Result<Vec<Matrix>, CliError> {
        self.coefficients
            .iter()
            .map(|c| Matrix::new(self.rows, self.cols, c.clone()).map_err(CliError::math))
            .collect()
    }

    pub fn from_matrices(mats: &[Matrix]) -> SeriesFile {
        SeriesFile {
            rows: mats[0].rows(),
            cols: mats[0].cols(),
            coefficients: mats.iter().map(|m| m.data().to_vec()).collect(),
        }
    }
}

/// Parse a headerless CSV matrix: one row per line, comma-separated
/// decimal numbers. Vectors are single-column.
pub fn parse_matrix_csv(text: &str) -> Result<Matrix, CliError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (colno, cell) in line.split(',').enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| {
                CliError::Input(format!(
                    "csv: non-numeric cell {:?} (line {}, column {})",
                    cell.trim(),
                    lineno + 1,
                    colno + 1
                ))
            })?;
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::Input(format!(
                    "csv: line {} has {} cells, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Input("csv: empty matrix".into()));
    }
    Matrix::from_rows(&rows).map_err(CliError::math)
}

/// Parse a comma-separated list of numbers from a flag value.
pub fn parse_number_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|cell| {
            cell.trim()
                .parse()
                .map_err(|_| CliError::Input(format!("non-numeric list entry {:?}", cell.trim())))
        })
        .collect()
}
