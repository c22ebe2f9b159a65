//! Named-column feature matrix with per-cell missing flags and per-row beat
//! provenance.

use crate::error::{EcgError, Result};
use crate::wfdb::AamiLabel;
use serde::{Deserialize, Serialize};

/// Where a row came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeatRef {
    pub record_id: String,
    pub r_peak: usize,
}

/// Row-major numeric matrix with named columns. Missing entries carry an
/// explicit flag rather than a sentinel value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureMatrix {
    names: Vec<String>,
    n_rows: usize,
    values: Vec<f64>,
    missing: Vec<bool>,
    pub labels: Vec<Option<AamiLabel>>,
    pub beat_refs: Vec<BeatRef>,
}

impl FeatureMatrix {
    pub fn empty(names: Vec<String>) -> Self {
        FeatureMatrix {
            names,
            n_rows: 0,
            values: Vec::new(),
            missing: Vec::new(),
            labels: Vec::new(),
            beat_refs: Vec::new(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn push_row(
        &mut self,
        values: Vec<f64>,
        missing: Vec<bool>,
        label: Option<AamiLabel>,
        beat_ref: BeatRef,
    ) -> Result<()> {
        if values.len() != self.names.len() || missing.len() != self.names.len() {
            return Err(EcgError::DimensionMismatch {
                expected: self.names.len(),
                actual: values.len(),
            });
        }
        self.values.extend_from_slice(&values);
        self.missing.extend_from_slice(&missing);
        self.labels.push(label);
        self.beat_refs.push(beat_ref);
        self.n_rows += 1;
        Ok(())
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.names.len() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        let c = self.names.len();
        self.values[row * c + col] = value;
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.missing[row * self.names.len() + col]
    }

    pub fn set_missing(&mut self, row: usize, col: usize, flag: bool) {
        let c = self.names.len();
        self.missing[row * c + col] = flag;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let c = self.names.len();
        &self.values[row * c..(row + 1) * c]
    }

    /// Append new columns; `columns` is column-major and each column must
    /// have `n_rows` entries.
    pub fn append_columns(
        &mut self,
        names: &[String],
        columns: &[Vec<f64>],
        missing: &[Vec<bool>],
    ) -> Result<()> {
        if names.len() != columns.len() || names.len() != missing.len() {
            return Err(EcgError::DimensionMismatch {
                expected: names.len(),
                actual: columns.len(),
            });
        }
        for (col, miss) in columns.iter().zip(missing) {
            if col.len() != self.n_rows || miss.len() != self.n_rows {
                return Err(EcgError::DimensionMismatch {
                    expected: self.n_rows,
                    actual: col.len(),
                });
            }
        }
        let old_c = self.names.len();
        let new_c = old_c + names.len();
        let mut values = Vec::with_capacity(self.n_rows * new_c);
        let mut missing_out = Vec::with_capacity(self.n_rows * new_c);
        for r in 0..self.n_rows {
            values.extend_from_slice(&self.values[r * old_c..(r + 1) * old_c]);
            missing_out.extend_from_slice(&self.missing[r * old_c..(r + 1) * old_c]);
            for (col, miss) in columns.iter().zip(missing) {
                values.push(col[r]);
                missing_out.push(miss[r]);
            }
        }
        self.names.extend(names.iter().cloned());
        self.values = values;
        self.missing = missing_out;
        Ok(())
    }

    /// New matrix holding only the requested columns (by index, in order).
    pub fn select_columns(&self, indices: &[usize]) -> FeatureMatrix {
        let names = indices.iter().map(|&i| self.names[i].clone()).collect();
        let mut out = FeatureMatrix::empty(names);
        for r in 0..self.n_rows {
            let values = indices.iter().map(|&i| self.get(r, i)).collect();
            let missing = indices.iter().map(|&i| self.is_missing(r, i)).collect();
            out.push_row(values, missing, self.labels[r], self.beat_refs[r].clone())
                .expect("selected row width matches by construction");
        }
        out
    }

    /// New matrix holding only the requested rows (in order).
    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        let mut out = FeatureMatrix::empty(self.names.clone());
        for &r in rows {
            out.push_row(
                self.row(r).to_vec(),
                (0..self.n_cols()).map(|c| self.is_missing(r, c)).collect(),
                self.labels[r],
                self.beat_refs[r].clone(),
            )
            .expect("row width matches by construction");
        }
        out
    }

    /// Labels as dense class indices; rows without labels are skipped by
    /// callers that need supervision.
    pub fn label_indices(&self) -> Vec<Option<usize>> {
        self.labels.iter().map(|l| l.map(|l| l.index())).collect()
    }

    /// CSV export: header is the registry names plus `label`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.names.join(","));
        out.push_str(",label\n");
        for r in 0..self.n_rows {
            for c in 0..self.names.len() {
                if c > 0 {
                    out.push(',');
                }
                if self.is_missing(r, c) {
                    // empty cell marks a missing value
                } else {
                    out.push_str(&format!("{:.9}", self.get(r, c)));
                }
            }
            out.push(',');
            if let Some(l) = self.labels[r] {
                out.push_str(l.as_str());
            }
            out.push('\n');
        }
        out
    }

    /// Compact binary dump: column-major little-endian f64 (missing cells as
    /// NaN) plus a JSON sidecar describing the schema.
    pub fn write_binary(&self, bin_path: &std::path::Path, json_path: &std::path::Path) -> Result<()> {
        let mut bytes = Vec::with_capacity(self.n_rows * self.names.len() * 8);
        for c in 0..self.names.len() {
            for r in 0..self.n_rows {
                let v = if self.is_missing(r, c) {
                    f64::NAN
                } else {
                    self.get(r, c)
                };
                bytes.extend_from_slice(&v.to_le_bytes());
            }
        }
        std::fs::write(bin_path, bytes)?;
        let sidecar = serde_json::json!({
            "layout": "column_major_f64_le",
            "n_rows": self.n_rows,
            "n_cols": self.names.len(),
            "names": self.names,
            "labels": self.labels,
            "missing_encoding": "NaN",
        });
        std::fs::write(json_path, serde_json::to_string_pretty(&sidecar)?)?;
        Ok(())
    }
}
