//! Subcommand implementations. Each returns the rendered report.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use symtest::oracle::{self, DiscreteDist, Pmf1D};
use symtest::rng::STREAM_ALGORITHM;
use symtest::simlab::{run_study, Scenario, StudyReport};
use symtest::stats::{run_suite, SuiteConfig};
use symtest::{derive_stream, validate_pair, HSpec, KernelSpec, TestReport};

use crate::cli::{Format, OracleArgs, StudyArgs, TestArgs};
use crate::csv_io::ingest_csv;

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Stream id of the root stream used by `test`.
const TEST_ROOT_STREAM: u64 = 0;

#[derive(Debug, Serialize, Deserialize)]
pub struct DrawsSummary {
    pub m: usize,
    pub seed: u64,
    pub stream_id: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InputSummary {
    pub path: String,
    pub rows: usize,
    pub dim: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TestDocument {
    pub schema: u32,
    pub version: String,
    pub rng: String,
    pub seed: u64,
    pub permutations: usize,
    pub alpha: f64,
    pub kernel: KernelSpec,
    pub h: HSpec,
    pub x: InputSummary,
    pub y: InputSummary,
    pub draws: Option<DrawsSummary>,
    pub reports: Vec<TestReport>,
}

fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn cmd_test(args: &TestArgs) -> Result<String> {
    let kernel = args.kernel.spec()?;
    let x = ingest_csv(&args.x).with_context(|| format!("reading {}", args.x.display()))?;
    let y = ingest_csv(&args.y).with_context(|| format!("reading {}", args.y.display()))?;
    validate_pair(&x, &y)?;
    let config = SuiteConfig {
        kernel,
        h: args.h_spec(),
        replicates: args.permutations,
        alpha: args.alpha,
    };
    let root = derive_stream(args.seed, TEST_ROOT_STREAM);
    let outcome = run_suite(&x, &y, &args.selected(), &config, &root)?;
    match args.output.format {
        Format::Csv => to_csv(&outcome.reports),
        Format::Json => to_json(&TestDocument {
            schema: SCHEMA,
            version: VERSION.to_string(),
            rng: STREAM_ALGORITHM.to_string(),
            seed: args.seed,
            permutations: args.permutations,
            alpha: args.alpha,
            kernel,
            h: config.h,
            x: InputSummary {
                path: args.x.display().to_string(),
                rows: x.rows(),
                dim: x.dim(),
            },
            y: InputSummary {
                path: args.y.display().to_string(),
                rows: y.rows(),
                dim: y.dim(),
            },
            draws: outcome.draws.map(|d| DrawsSummary {
                m: d.len(),
                seed: d.seed,
                stream_id: d.stream_id,
            }),
            reports: outcome.reports,
        }),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScenarioFile {
    One(Scenario),
    Many(Vec<Scenario>),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StudyEntry {
    pub scenario: Scenario,
    pub report: StudyReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StudyDocument {
    pub schema: u32,
    pub version: String,
    pub rng: String,
    pub studies: Vec<StudyEntry>,
}

#[derive(Serialize)]
struct StudyCsvRow<'a> {
    scenario: &'a str,
    test: &'a str,
    rejection_rate: f64,
    std_error: f64,
    mean_statistic: f64,
    trials: usize,
    replicates: usize,
    alpha: f64,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
}

pub fn cmd_study(args: &StudyArgs) -> Result<String> {
    let text = std::fs::read_to_string(&args.scenario)
        .with_context(|| format!("reading {}", args.scenario.display()))?;
    let scenarios = match serde_json::from_str(&text).context("parsing scenario file")? {
        ScenarioFile::One(s) => vec![s],
        ScenarioFile::Many(v) => v,
    };
    let mut studies = Vec::with_capacity(scenarios.len());
    for scenario in scenarios {
        let mut report = run_study(&scenario)?;
        if !args.timings {
            report = report.without_timings();
        }
        studies.push(StudyEntry { scenario, report });
    }
    match args.output.format {
        Format::Json => to_json(&StudyDocument {
            schema: SCHEMA,
            version: VERSION.to_string(),
            rng: STREAM_ALGORITHM.to_string(),
            studies,
        }),
        Format::Csv => {
            let rows: Vec<StudyCsvRow> = studies
                .iter()
                .flat_map(|e| {
                    e.report.rows.iter().map(move |r| StudyCsvRow {
                        scenario: &e.report.scenario,
                        test: r.test.name(),
                        rejection_rate: r.rejection_rate,
                        std_error: r.std_error,
                        mean_statistic: r.mean_statistic,
                        trials: e.report.trials,
                        replicates: e.report.replicates,
                        alpha: e.report.alpha,
                        seed: e.report.seed,
                        wall_time_s: r.wall_time_s,
                    })
                })
                .collect();
            to_csv(&rows)
        }
    }
}

#[derive(Deserialize)]
struct DistInput {
    support: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

fn parse_dist(flag: &str, text: &str) -> Result<DiscreteDist> {
    let raw: DistInput =
        serde_json::from_str(text).with_context(|| format!("parsing {flag} as JSON"))?;
    DiscreteDist::new(raw.support, raw.probs).with_context(|| format!("in {flag}"))
}

/// Points of the characteristic-function check, `−3, −2.75, …, 3`.
pub fn default_cf_grid() -> Vec<f64> {
    (0..=24).map(|k| -3.0 + 0.25 * k as f64).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OracleDocument {
    pub schema: u32,
    pub version: String,
    pub kernel: KernelSpec,
    pub px: DiscreteDist,
    pub py: DiscreteDist,
    /// `[value, probability]` pairs sorted by value.
    pub pmf: Vec<(f64, f64)>,
    pub symmetric: bool,
    pub cf_residual: f64,
    pub cf_grid: Vec<f64>,
    pub p_nonnegative: f64,
    pub p_nonpositive: f64,
    pub population_energy: f64,
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<String> {
    let kernel = args.kernel.spec()?;
    let px = parse_dist("--px", &args.px)?;
    let py = parse_dist("--py", &args.py)?;
    let pmf: Pmf1D = oracle::exact_s_pmf_with_cap(&px, &py, &kernel, args.max_terms)?;
    let grid = default_cf_grid();
    let cf_residual = oracle::cf_identity_check(&px, &py, &kernel, &grid)?;
    let (p_nonnegative, p_nonpositive) = pmf.median_masses();
    let population_energy = oracle::population_energy(&px, &py, &kernel)?;
    to_json(&OracleDocument {
        schema: SCHEMA,
        version: VERSION.to_string(),
        kernel,
        symmetric: oracle::symmetry_verdict(&pmf, oracle::PROB_TOL),
        pmf: pmf.atoms().to_vec(),
        cf_residual,
        cf_grid: grid,
        p_nonnegative,
        p_nonpositive,
        population_energy,
        px,
        py,
    })
}
