//! Realizations of the symmetrization statistic S.
//!
//! For independent `X, X′ ~ P`, `Y, Y′ ~ Q` and fair bits `ε, δ`,
//!
//! ```text
//! S = δ·d(X, Y) − (1 − δ)·(ε·d(X, X′) + (1 − ε)·d(Y, Y′))
//! ```
//!
//! is symmetric about zero exactly when `P = Q`. From finite samples we
//! build independent copies of S by cutting each sample into disjoint
//! blocks: every block consumes two fresh observations of X and two of Y,
//! so no observation feeds more than one draw.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{validate_pair, Dataset};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::rng::RngStream;

/// The six ingredients of one S draw.
#[derive(Debug, Clone, Copy)]
pub struct Block<'a> {
    pub x1: &'a [f64],
    pub x2: &'a [f64],
    pub y1: &'a [f64],
    pub y2: &'a [f64],
    pub eps: bool,
    pub delta: bool,
}

/// Observation indices and coin flips used by one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPlan {
    pub x: [usize; 2],
    pub y: [usize; 2],
    pub eps: bool,
    pub delta: bool,
}

impl BlockPlan {
    fn bind<'a>(&self, x: &'a Dataset, y: &'a Dataset) -> Block<'a> {
        Block {
            x1: x.row(self.x[0]),
            x2: x.row(self.x[1]),
            y1: y.row(self.y[0]),
            y2: y.row(self.y[1]),
            eps: self.eps,
            delta: self.delta,
        }
    }
}

/// Independent draws of S together with what is needed to replay them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SDraws {
    pub values: Vec<f64>,
    pub seed: u64,
    pub stream_id: u64,
    pub blocks_used: usize,
    pub kernel: KernelSpec,
    pub plan: Vec<BlockPlan>,
}

impl SDraws {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One realization of S for a fully specified block.
pub fn draw_s(block: &Block<'_>, spec: &KernelSpec) -> Result<f64> {
    spec.validate()?;
    let dim = block.x1.len();
    for p in [block.x2, block.y1, block.y2] {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
    }
    Ok(eval_block(block, spec))
}

#[inline]
fn eval_block(block: &Block<'_>, spec: &KernelSpec) -> f64 {
    if block.delta {
        spec.eval(block.x1, block.y1)
    } else {
        -within(block, spec)
    }
}

#[inline]
fn within(block: &Block<'_>, spec: &KernelSpec) -> f64 {
    if block.eps {
        spec.eval(block.x1, block.x2)
    } else {
        spec.eval(block.y1, block.y2)
    }
}

/// Shuffles both samples and cuts them into `⌊min(n_x, n_y) / 2⌋` disjoint
/// blocks. Leftover observations are not used.
pub fn plan_blocks(n_x: usize, n_y: usize, stream: &RngStream) -> Result<Vec<BlockPlan>> {
    let fewest = n_x.min(n_y);
    if fewest < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            found: fewest,
        });
    }
    let mut rng = stream.rng();
    let mut ix: Vec<usize> = (0..n_x).collect();
    let mut iy: Vec<usize> = (0..n_y).collect();
    ix.shuffle(&mut rng);
    iy.shuffle(&mut rng);
    let plan = (0..fewest / 2)
        .map(|b| {
            let bits: u32 = rng.random();
            BlockPlan {
                x: [ix[2 * b], ix[2 * b + 1]],
                y: [iy[2 * b], iy[2 * b + 1]],
                eps: bits & 1 == 1,
                delta: bits & 2 == 2,
            }
        })
        .collect();
    Ok(plan)
}

fn checked_plan(
    x: &Dataset,
    y: &Dataset,
    spec: &KernelSpec,
    stream: &RngStream,
) -> Result<Vec<BlockPlan>> {
    validate_pair(x, y)?;
    spec.validate()?;
    plan_blocks(x.rows(), y.rows(), stream)
}

/// Independent draws of S from the samples `x` and `y`.
pub fn build_s_sample(
    x: &Dataset,
    y: &Dataset,
    spec: &KernelSpec,
    stream: &RngStream,
) -> Result<SDraws> {
    let plan = checked_plan(x, y, spec, stream)?;
    let values: Vec<f64> = plan
        .par_iter()
        .map(|p| eval_block(&p.bind(x, y), spec))
        .collect();
    Ok(SDraws {
        blocks_used: values.len(),
        values,
        seed: stream.seed,
        stream_id: stream.stream_id,
        kernel: *spec,
        plan,
    })
}

/// Between-sample distances and ε-mixed within-sample distances, one of
/// each per block. Their laws coincide exactly when the two samples share
/// a distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSplit {
    pub between: Vec<f64>,
    pub within_mixed: Vec<f64>,
}

/// Uses the same block plan as [`build_s_sample`] for the same stream.
pub fn split_distances(
    x: &Dataset,
    y: &Dataset,
    spec: &KernelSpec,
    stream: &RngStream,
) -> Result<DistanceSplit> {
    let plan = checked_plan(x, y, spec, stream)?;
    let (between, within_mixed) = plan
        .par_iter()
        .map(|p| {
            let block = p.bind(x, y);
            (spec.eval(block.x1, block.y1), within(&block, spec))
        })
        .unzip();
    Ok(DistanceSplit {
        between,
        within_mixed,
    })
}
