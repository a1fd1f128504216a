//! Two-sample testing for multivariate data by way of a symmetry test.
//!
//! Given samples from `P` and `Q` on `ℝᵈ`, the one-dimensional variable
//!
//! ```text
//! S = δ·d(X, Y) − (1 − δ)·(ε·d(X, X′) + (1 − ε)·d(Y, Y′))
//! ```
//!
//! (independent `X, X′ ~ P`, `Y, Y′ ~ Q`, fair coins `ε, δ`) is symmetric
//! about zero if and only if `P = Q`. The crate builds independent draws
//! of S from finite samples ([`construct`]), tests their symmetry with
//! sign-flip calibrated statistics ([`stats`]), offers the kernel energy
//! statistic as a direct comparison, enumerates exact laws for discrete
//! inputs ([`oracle`]) and runs Monte Carlo size/power studies
//! ([`simlab`]).

pub mod construct;
pub mod data;
pub mod error;
pub mod kernels;
pub mod oracle;
pub mod rng;
pub mod simlab;
pub mod stats;

pub use construct::{build_s_sample, draw_s, split_distances, Block, BlockPlan, DistanceSplit, SDraws};
pub use data::{validate_pair, Dataset};
pub use error::{Error, Result};
pub use kernels::{distance, pairwise, snd_kernel, KernelSpec, PairwiseMatrix};
pub use rng::{derive_stream, RngStream};
pub use stats::{HSpec, SymmetryStatistic, TestKind, TestReport};
