//! Test statistics and their permutation calibration.

mod energy;
mod permutation;
mod suite;
mod symmetry;

pub use energy::energy_statistic;
pub(crate) use permutation::check_alpha;
pub use permutation::{label_permutation_test, sign_flip_test, TestReport, TIE_RTOL};
pub use suite::{run_suite, SuiteConfig, SuiteOutcome, TestKind};
pub use symmetry::{
    h_functional, ks_fg, sign_cf_statistic, wilcoxon_signed_rank, EmpiricalCdf, HSpec,
    SymmetryStatistic,
};
