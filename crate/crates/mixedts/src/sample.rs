//! Observation matrices shared by the samplers, the estimator and the CLI.

use crate::error::{Error, Result};

/// An `m × N` matrix of observations, one row per draw and one column per
/// component. Stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl SampleMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        if cols == 0 {
            return Err(Error::InsufficientData(
                "sample matrix needs at least one column".into(),
            ));
        }
        let mut data = Vec::with_capacity(n_rows * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::InvalidParameter(
                    "ragged rows in sample matrix".into(),
                ));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            data,
            rows: n_rows,
            cols,
        })
    }

    /// Single-column matrix from a vector of observations.
    pub fn from_column(values: Vec<f64>) -> Self {
        let rows = values.len();
        Self {
            data: values,
            rows,
            cols: 1,
        }
    }

    pub(crate) fn from_flat(data: Vec<f64>, rows: usize, cols: usize) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { data, rows, cols }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.data[j..].iter().step_by(self.cols).copied().collect()
    }

    /// New matrix made of the given row indices (with repetition allowed),
    /// the bootstrap resampling primitive.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self {
            data,
            rows: indices.len(),
            cols: self.cols,
        }
    }

    /// Serializes as CSV with header `y1,...,yN` and `.` decimal separator.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.cols).map(|j| format!("y{j}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in self.rows_iter() {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses CSV produced by [`SampleMatrix::to_csv`] (or any numeric CSV
    /// with an optional non-numeric header row).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|f| f.trim().parse::<f64>()).collect();
            match parsed {
                Ok(vals) => rows.push(vals),
                Err(e) => {
                    if lineno == 0 {
                        continue; // header row
                    }
                    return Err(Error::Io(format!("csv line {}: {e}", lineno + 1)));
                }
            }
        }
        if rows.is_empty() {
            return Err(Error::InsufficientData("csv contains no data rows".into()));
        }
        Self::from_rows(rows)
    }
}
