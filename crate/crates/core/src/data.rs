//! Dense sample storage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One multivariate sample: `rows` observations of dimension `dim`, stored
/// row-major. Every entry is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDataset", into = "RawDataset")]
pub struct Dataset {
    rows: usize,
    dim: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawDataset {
    rows: usize,
    dim: usize,
    values: Vec<f64>,
}

impl TryFrom<RawDataset> for Dataset {
    type Error = Error;

    fn try_from(raw: RawDataset) -> Result<Self> {
        Dataset::new(raw.rows, raw.dim, raw.values)
    }
}

impl From<Dataset> for RawDataset {
    fn from(d: Dataset) -> Self {
        RawDataset {
            rows: d.rows,
            dim: d.dim,
            values: d.values,
        }
    }
}

impl Dataset {
    pub fn new(rows: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || dim == 0 {
            return Err(Error::EmptyDataset);
        }
        if values.len() != rows * dim {
            return Err(Error::DimensionMismatch {
                expected: rows * dim,
                found: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                row: pos / dim,
                col: pos % dim,
            });
        }
        Ok(Self { rows, dim, values })
    }

    /// Builds a dataset from a list of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyDataset)?;
        let dim = first.as_ref().len();
        let mut values = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), dim, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.dim)
    }

    /// Concatenates the rows of `self` and `other`.
    pub fn concat(&self, other: &Dataset) -> Result<Dataset> {
        check_dims(self, other)?;
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        Ok(Dataset {
            rows: self.rows + other.rows,
            dim: self.dim,
            values,
        })
    }

    /// Dataset made of the given rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Dataset> {
        if indices.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut values = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Ok(Dataset {
            rows: indices.len(),
            dim: self.dim,
            values,
        })
    }
}

fn check_dims(x: &Dataset, y: &Dataset) -> Result<()> {
    if x.dim != y.dim {
        return Err(Error::DimensionMismatch {
            expected: x.dim,
            found: y.dim,
        });
    }
    Ok(())
}

/// Checks that two datasets can be compared in one test.
///
/// `Dataset` values are validated on construction, so this re-checks the
/// invariants only for robustness against hand-built values and then
/// compares dimensions.
pub fn validate_pair(x: &Dataset, y: &Dataset) -> Result<()> {
    for d in [x, y] {
        if d.rows == 0 || d.dim == 0 {
            return Err(Error::EmptyDataset);
        }
        if let Some(pos) = d.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                row: pos / d.dim,
                col: pos % d.dim,
            });
        }
    }
    check_dims(x, y)
}
