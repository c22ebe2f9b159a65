//! Median imputation and z-score standardization, fit on training rows only.

use crate::error::{EcgError, Result};
use crate::features::FeatureMatrix;
use serde::{Deserialize, Serialize};

/// Fitted imputation + standardization statistics.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Standardizer {
    pub medians: Vec<f64>,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// Columns with zero variance on the fit rows; zeroed on transform.
    pub constant_columns: Vec<bool>,
}

/// Fit medians (per column over non-missing fit-row entries) and
/// mean/std (population) of the imputed fit rows.
pub fn fit_standardizer(matrix: &FeatureMatrix, fit_rows: &[usize]) -> Result<Standardizer> {
    if fit_rows.is_empty() {
        return Err(EcgError::InvalidParameter("no fit rows".into()));
    }
    let c = matrix.n_cols();
    let mut medians = vec![0.0f64; c];
    let mut means = vec![0.0f64; c];
    let mut stds = vec![0.0f64; c];
    let mut constant = vec![false; c];
    for col in 0..c {
        let mut present: Vec<f64> = fit_rows
            .iter()
            .filter(|&&r| !matrix.is_missing(r, col))
            .map(|&r| matrix.get(r, col))
            .collect();
        let median = if present.is_empty() {
            log::warn!(
                "column '{}' is missing on every fit row; imputing 0",
                matrix.names()[col]
            );
            0.0
        } else {
            present.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if present.len() % 2 == 1 {
                present[present.len() / 2]
            } else {
                0.5 * (present[present.len() / 2 - 1] + present[present.len() / 2])
            }
        };
        medians[col] = median;

        let imputed = |r: usize| {
            if matrix.is_missing(r, col) {
                median
            } else {
                matrix.get(r, col)
            }
        };
        let n = fit_rows.len() as f64;
        let mean = fit_rows.iter().map(|&r| imputed(r)).sum::<f64>() / n;
        let var = fit_rows
            .iter()
            .map(|&r| (imputed(r) - mean).powi(2))
            .sum::<f64>()
            / n;
        means[col] = mean;
        let std = var.sqrt();
        if std > 0.0 {
            stds[col] = std;
        } else {
            stds[col] = 1.0;
            constant[col] = true;
        }
    }
    Ok(Standardizer {
        medians,
        means,
        stds,
        constant_columns: constant,
    })
}

/// Apply fitted statistics: impute missing cells with fit medians, z-score
/// every column, and zero out constant columns. Never refits.
pub fn apply_standardizer(state: &Standardizer, matrix: &FeatureMatrix) -> Result<FeatureMatrix> {
    if state.medians.len() != matrix.n_cols() {
        return Err(EcgError::DimensionMismatch {
            expected: state.medians.len(),
            actual: matrix.n_cols(),
        });
    }
    let mut out = matrix.clone();
    for r in 0..out.n_rows() {
        for c in 0..out.n_cols() {
            let raw = if out.is_missing(r, c) {
                state.medians[c]
            } else {
                out.get(r, c)
            };
            let v = if state.constant_columns[c] {
                0.0
            } else {
                (raw - state.means[c]) / state.stds[c]
            };
            out.set(r, c, v);
            out.set_missing(r, c, false);
        }
    }
    Ok(out)
}

/// Convenience: fit on `fit_rows` and transform the whole matrix.
pub fn impute_standardize(
    matrix: &FeatureMatrix,
    fit_rows: &[usize],
) -> Result<(FeatureMatrix, Standardizer)> {
    let state = fit_standardizer(matrix, fit_rows)?;
    let transformed = apply_standardizer(&state, matrix)?;
    Ok((transformed, state))
}
