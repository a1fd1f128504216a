//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symtest::{HSpec, KernelSpec, TestKind};

#[derive(Debug, Parser)]
#[command(name = "symtest", version, about = "Two-sample tests through symmetry of S")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether two CSV samples share a distribution.
    Test(TestArgs),
    /// Run Monte Carlo size/power studies described in a JSON file.
    Study(StudyArgs),
    /// Exact law of S for small discrete distributions given inline as JSON.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestArg {
    SignCf,
    Wilcoxon,
    Hfunc,
    KsFg,
    Energy,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Euclidean,
    Gauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HArg {
    Power2,
    Expm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct KernelOpts {
    #[arg(long, value_enum, default_value = "euclidean")]
    pub kernel: KernelArg,
    /// Gaussian kernel scale σ.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub scale: f64,
}

impl KernelOpts {
    pub fn spec(&self) -> symtest::Result<KernelSpec> {
        match self.kernel {
            KernelArg::Euclidean => Ok(KernelSpec::EuclideanNorm),
            KernelArg::Gauss => KernelSpec::gaussian(self.scale),
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputOpts {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// CSV file with the first sample.
    pub x: PathBuf,
    /// CSV file with the second sample.
    pub y: PathBuf,
    #[arg(long = "test", value_enum, value_delimiter = ',', default_value = "all")]
    pub tests: Vec<TestArg>,
    #[command(flatten)]
    pub kernel: KernelOpts,
    #[arg(long, value_enum, default_value = "power2")]
    pub h: HArg,
    #[arg(long, default_value_t = 999)]
    pub permutations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: OutputOpts,
}

impl TestArgs {
    pub fn selected(&self) -> Vec<TestKind> {
        if self.tests.contains(&TestArg::All) {
            return TestKind::ALL.to_vec();
        }
        let mut out: Vec<TestKind> = Vec::new();
        for t in &self.tests {
            let kind = match t {
                TestArg::SignCf => TestKind::SignCf,
                TestArg::Wilcoxon => TestKind::Wilcoxon,
                TestArg::Hfunc => TestKind::Hfunc,
                TestArg::KsFg => TestKind::KsFg,
                TestArg::Energy => TestKind::Energy,
                TestArg::All => unreachable!(),
            };
            if !out.contains(&kind) {
                out.push(kind);
            }
        }
        out
    }

    pub fn h_spec(&self) -> HSpec {
        match self.h {
            HArg::Power2 => HSpec::Power { p: 2.0 },
            HArg::Expm => HSpec::ExpMinusOne,
        }
    }
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    /// JSON file holding one scenario or an array of scenarios.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Law of X, e.g. '{"support": [[0], [1]], "probs": [0.5, 0.5]}'.
    #[arg(long)]
    pub px: String,
    /// Law of Y, same shape as --px.
    #[arg(long)]
    pub py: String,
    #[command(flatten)]
    pub kernel: KernelOpts,
    /// Cap on the number of (X, X′, Y, Y′) tuples enumerated.
    #[arg(long, default_value_t = symtest::oracle::DEFAULT_TERM_CAP)]
    pub max_terms: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
