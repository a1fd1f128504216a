//! Distances and strongly negative definite kernels.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{validate_pair, Dataset};
use crate::error::{Error, Result};

/// Selects the function `d(a, b)` used everywhere a distance is needed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KernelSpec {
    /// `‖a − b‖`.
    #[default]
    EuclideanNorm,
    /// `1 − exp(−‖a − b‖² / (2σ²))`; `scale = 1` is the standard Gaussian
    /// strongly negative definite kernel.
    GaussianSnd { scale: f64 },
}

impl KernelSpec {
    pub fn gaussian(scale: f64) -> Result<Self> {
        let spec = KernelSpec::GaussianSnd { scale };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::EuclideanNorm => Ok(()),
            KernelSpec::GaussianSnd { scale } if scale > 0.0 && scale.is_finite() => Ok(()),
            KernelSpec::GaussianSnd { scale } => Err(Error::NonPositiveScale(scale)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::EuclideanNorm => "euclidean-norm",
            KernelSpec::GaussianSnd { .. } => "gaussian-snd",
        }
    }

    /// Evaluates the kernel without checking lengths. Callers guarantee
    /// `a.len() == b.len()` and a validated spec.
    #[inline]
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        let sq = squared_distance(a, b);
        match *self {
            KernelSpec::EuclideanNorm => sq.sqrt(),
            KernelSpec::GaussianSnd { scale } => -(-sq / (2.0 * scale * scale)).exp_m1(),
        }
    }

    /// Checked evaluation.
    pub fn apply(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        self.validate()?;
        same_len(a, b)?;
        Ok(self.eval(a, b))
    }
}

#[inline]
fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn same_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// Euclidean distance `‖a − b‖`.
pub fn distance(a: &[f64], b: &[f64]) -> Result<f64> {
    KernelSpec::EuclideanNorm.apply(a, b)
}

/// Gaussian strongly negative definite kernel `1 − exp(−‖a − b‖² / (2σ²))`.
pub fn snd_kernel(a: &[f64], b: &[f64], scale: f64) -> Result<f64> {
    KernelSpec::gaussian(scale)?.apply(a, b)
}

/// Dense `rows × cols` matrix of kernel values, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl PairwiseMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }
}

/// All kernel values `spec(xs[i], ys[j])`. Rows are filled in parallel;
/// each entry is computed independently so the result does not depend on
/// the thread count.
pub fn pairwise(xs: &Dataset, ys: &Dataset, spec: &KernelSpec) -> Result<PairwiseMatrix> {
    validate_pair(xs, ys)?;
    spec.validate()?;
    let cols = ys.rows();
    let mut values = vec![0.0; xs.rows() * cols];
    values
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(i, out)| {
            let a = xs.row(i);
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = spec.eval(a, ys.row(j));
            }
        });
    Ok(PairwiseMatrix {
        rows: xs.rows(),
        cols,
        values,
    })
}
