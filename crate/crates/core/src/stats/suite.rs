//! Running a selection of tests on one pair of samples.

use serde::{Deserialize, Serialize};

use super::permutation::{label_permutation_test, sign_flip_test, TestReport};
use super::symmetry::{HSpec, SymmetryStatistic};
use crate::construct::{build_s_sample, SDraws};
use crate::data::{validate_pair, Dataset};
use crate::error::Result;
use crate::kernels::KernelSpec;
use crate::rng::RngStream;

/// The tests offered by the command line and the study harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    SignCf,
    Wilcoxon,
    Hfunc,
    KsFg,
    Energy,
}

impl TestKind {
    pub const ALL: [TestKind; 5] = [
        TestKind::SignCf,
        TestKind::Wilcoxon,
        TestKind::Hfunc,
        TestKind::KsFg,
        TestKind::Energy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TestKind::SignCf => "sign-cf",
            TestKind::Wilcoxon => "wilcoxon",
            TestKind::Hfunc => "hfunc",
            TestKind::KsFg => "ks-fg",
            TestKind::Energy => "energy",
        }
    }

    /// The statistic applied to S draws, or `None` for the energy test.
    pub fn symmetry_statistic(&self, h: HSpec) -> Option<SymmetryStatistic> {
        match self {
            TestKind::SignCf => Some(SymmetryStatistic::SignCf),
            TestKind::Wilcoxon => Some(SymmetryStatistic::Wilcoxon),
            TestKind::Hfunc => Some(SymmetryStatistic::HFunctional { h }),
            TestKind::KsFg => Some(SymmetryStatistic::KsFg),
            TestKind::Energy => None,
        }
    }

    // Fixed per-test child stream, independent of the selection order.
    fn stream_index(&self) -> u64 {
        1 + *self as u64
    }
}

/// Settings shared by every test in a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub kernel: KernelSpec,
    pub h: HSpec,
    pub replicates: usize,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    /// Present when at least one S-based test was run.
    pub draws: Option<SDraws>,
    pub reports: Vec<TestReport>,
}

/// Runs `tests` on `x` against `y`.
///
/// S draws come from `root.child(0)`; each test calibrates with its own
/// fixed child of `root`, so a test's report does not depend on which
/// other tests were selected.
pub fn run_suite(
    x: &Dataset,
    y: &Dataset,
    tests: &[TestKind],
    config: &SuiteConfig,
    root: &RngStream,
) -> Result<SuiteOutcome> {
    validate_pair(x, y)?;
    config.kernel.validate()?;
    config.h.validate()?;
    let needs_draws = tests.iter().any(|t| *t != TestKind::Energy);
    let draws = if needs_draws {
        Some(build_s_sample(x, y, &config.kernel, &root.child(0))?)
    } else {
        None
    };
    let mut reports = Vec::with_capacity(tests.len());
    for test in tests {
        let stream = root.child(test.stream_index());
        let report = match (test.symmetry_statistic(config.h), &draws) {
            (Some(stat), Some(d)) => {
                sign_flip_test(d.values(), &stat, config.replicates, &stream, config.alpha)?
            }
            _ => label_permutation_test(x, y, &config.kernel, config.replicates, &stream, config.alpha)?,
        };
        reports.push(report);
    }
    Ok(SuiteOutcome { draws, reports })
}
