//! Monte Carlo size and power studies.

use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::rng::{derive_stream, StreamRng};
use crate::stats::{check_alpha, run_suite, HSpec, SuiteConfig, TestKind};

/// Sampling distribution for one side of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Generator {
    /// `N(mean, scale²·I)`.
    Gaussian { mean: Vec<f64>, scale: f64 },
    /// Independent coordinates uniform on `[low, high)`.
    UniformCube { low: f64, high: f64 },
    /// Equal mixture of `N(−shift·e₁, I)` and `N(shift·e₁, I)`.
    GaussianMixture { shift: f64 },
}

impl Generator {
    /// Standard normal in `dim` dimensions with the first coordinate moved
    /// by `shift`.
    pub fn shifted_gaussian(dim: usize, shift: f64) -> Self {
        let mut mean = vec![0.0; dim];
        mean[0] = shift;
        Generator::Gaussian { mean, scale: 1.0 }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        match self {
            Generator::Gaussian { mean, scale } => {
                if mean.len() != dim {
                    return bad(format!("gaussian mean has {} entries, dim is {dim}", mean.len()));
                }
                if mean.iter().any(|v| !v.is_finite()) || !(*scale > 0.0 && scale.is_finite()) {
                    return bad("gaussian needs a finite mean and positive scale".into());
                }
            }
            Generator::UniformCube { low, high } => {
                if !(low.is_finite() && high.is_finite() && low < high) {
                    return bad(format!("uniform cube needs low < high, got [{low}, {high})"));
                }
            }
            Generator::GaussianMixture { shift } => {
                if !shift.is_finite() {
                    return bad("mixture shift must be finite".into());
                }
            }
        }
        Ok(())
    }

    pub fn sample(&self, rows: usize, dim: usize, rng: &mut StreamRng) -> Result<Dataset> {
        let mut values = Vec::with_capacity(rows * dim);
        for _ in 0..rows {
            match self {
                Generator::Gaussian { mean, scale } => {
                    values.extend(mean.iter().map(|mu| {
                        let z: f64 = rng.sample(StandardNormal);
                        mu + scale * z
                    }));
                }
                Generator::UniformCube { low, high } => {
                    values.extend((0..dim).map(|_| rng.random_range(*low..*high)));
                }
                Generator::GaussianMixture { shift } => {
                    let side = if rng.random::<bool>() { *shift } else { -*shift };
                    for k in 0..dim {
                        let z: f64 = rng.sample(StandardNormal);
                        values.push(if k == 0 { z + side } else { z });
                    }
                }
            }
        }
        Dataset::new(rows, dim, values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub generator_x: Generator,
    pub generator_y: Generator,
    pub n: usize,
    pub m: usize,
    pub dim: usize,
    pub kernel: KernelSpec,
    pub tests: Vec<TestKind>,
    pub h: HSpec,
    /// Permutation replicates per test.
    pub replicates: usize,
    pub trials: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidScenario(format!("{}: {msg}", self.name)));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.replicates == 0 {
            return bad("replicates must be at least 1");
        }
        if self.tests.is_empty() {
            return bad("no tests selected");
        }
        if self.dim == 0 {
            return bad("dim must be at least 1");
        }
        let needs_pairs = self.tests.iter().any(|t| *t != TestKind::Energy);
        let min_rows = if needs_pairs { 2 } else { 1 };
        if self.n < min_rows || self.m < min_rows {
            return bad("sample sizes too small for the selected tests");
        }
        if check_alpha(self.alpha).is_err() {
            return bad("alpha must lie in (0, 1)");
        }
        if self.kernel.validate().is_err() {
            return bad("kernel scale must be positive");
        }
        if self.h.validate().is_err() {
            return bad("h must be a power above 1 or exp-minus-one");
        }
        self.generator_x.validate(self.dim)?;
        self.generator_y.validate(self.dim)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub test: TestKind,
    pub rejection_rate: f64,
    /// `√(r(1 − r)/trials)`.
    pub std_error: f64,
    pub mean_statistic: f64,
    /// Summed time spent in this test across trials. Not reproducible, so
    /// it is left out of reports unless asked for.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub scenario: String,
    pub trials: usize,
    pub replicates: usize,
    pub alpha: f64,
    pub seed: u64,
    pub rows: Vec<StudyRow>,
}

impl StudyReport {
    pub fn without_timings(mut self) -> Self {
        for row in &mut self.rows {
            row.wall_time_s = None;
        }
        self
    }

    pub fn row(&self, test: TestKind) -> Option<&StudyRow> {
        self.rows.iter().find(|r| r.test == test)
    }
}

// Child indices of a trial stream used for data generation; the test
// suite uses children 0..=5.
const X_STREAM: u64 = 100;
const Y_STREAM: u64 = 101;

struct TrialResult {
    reject: Vec<bool>,
    statistic: Vec<f64>,
    seconds: Vec<f64>,
}

fn run_trial(sc: &Scenario, config: &SuiteConfig, trial: u64) -> Result<TrialResult> {
    let root = derive_stream(sc.seed, trial);
    let x = sc.generator_x.sample(sc.n, sc.dim, &mut root.child(X_STREAM).rng())?;
    let y = sc.generator_y.sample(sc.m, sc.dim, &mut root.child(Y_STREAM).rng())?;
    let mut out = TrialResult {
        reject: Vec::with_capacity(sc.tests.len()),
        statistic: Vec::with_capacity(sc.tests.len()),
        seconds: Vec::with_capacity(sc.tests.len()),
    };
    for test in &sc.tests {
        let start = Instant::now();
        let outcome = run_suite(&x, &y, std::slice::from_ref(test), config, &root)?;
        out.seconds.push(start.elapsed().as_secs_f64());
        let report = &outcome.reports[0];
        out.reject.push(report.reject);
        out.statistic.push(report.statistic);
    }
    Ok(out)
}

/// Runs every trial of `sc` and tallies rejections per test.
///
/// Trial `t` draws all of its randomness from `derive_stream(seed, t)`, so
/// the report is the same whatever the number of worker threads.
pub fn run_study(sc: &Scenario) -> Result<StudyReport> {
    sc.validate()?;
    let config = SuiteConfig {
        kernel: sc.kernel,
        h: sc.h,
        replicates: sc.replicates,
        alpha: sc.alpha,
    };
    let trials: Vec<TrialResult> = (0..sc.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(sc, &config, t))
        .collect::<Result<_>>()?;
    let count = sc.trials as f64;
    let rows = sc
        .tests
        .iter()
        .enumerate()
        .map(|(k, &test)| {
            let rejections = trials.iter().filter(|t| t.reject[k]).count();
            let rate = rejections as f64 / count;
            let mean_statistic = trials.iter().map(|t| t.statistic[k]).sum::<f64>() / count;
            StudyRow {
                test,
                rejection_rate: rate,
                std_error: (rate * (1.0 - rate) / count).sqrt(),
                mean_statistic,
                wall_time_s: Some(trials.iter().map(|t| t.seconds[k]).sum()),
            }
        })
        .collect();
    Ok(StudyReport {
        scenario: sc.name.clone(),
        trials: sc.trials,
        replicates: sc.replicates,
        alpha: sc.alpha,
        seed: sc.seed,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(trials: usize) -> Scenario {
        Scenario {
            name: "unit".into(),
            generator_x: Generator::shifted_gaussian(2, 0.0),
            generator_y: Generator::UniformCube { low: -1.0, high: 1.0 },
            n: 10,
            m: 12,
            dim: 2,
            kernel: KernelSpec::EuclideanNorm,
            tests: TestKind::ALL.to_vec(),
            h: HSpec::default(),
            replicates: 19,
            trials,
            alpha: 0.05,
            seed: 17,
        }
    }

    #[test]
    fn single_trial_is_degenerate() {
        let r = run_study(&scenario(1)).unwrap();
        assert_eq!(r.rows.len(), 5);
        for row in &r.rows {
            assert!(row.rejection_rate == 0.0 || row.rejection_rate == 1.0);
            assert_eq!(row.std_error, 0.0);
        }
    }

    #[test]
    fn deterministic() {
        let a = run_study(&scenario(6)).unwrap().without_timings();
        let b = run_study(&scenario(6)).unwrap().without_timings();
        assert_eq!(a, b);
        assert!(a.rows.iter().all(|r| r.wall_time_s.is_none()));
    }

    #[test]
    fn invalid_scenarios() {
        let mut sc = scenario(0);
        assert!(matches!(run_study(&sc), Err(Error::InvalidScenario(_))));
        sc.trials = 1;
        sc.replicates = 0;
        assert!(sc.validate().is_err());
        sc.replicates = 9;
        sc.generator_x = Generator::Gaussian { mean: vec![0.0], scale: 1.0 };
        assert!(sc.validate().is_err());
        sc.generator_x = Generator::UniformCube { low: 1.0, high: 1.0 };
        assert!(sc.validate().is_err());
        sc.generator_x = Generator::GaussianMixture { shift: 2.0 };
        sc.n = 1;
        assert!(sc.validate().is_err());
        sc.tests = vec![TestKind::Energy];
        assert!(sc.validate().is_ok());
        sc.alpha = 0.0;
        assert!(sc.validate().is_err());
    }

    #[test]
    fn generators_shape() {
        let mut rng = derive_stream(0, 0).rng();
        for g in [
            Generator::shifted_gaussian(3, 2.0),
            Generator::UniformCube { low: 2.0, high: 3.0 },
            Generator::GaussianMixture { shift: 4.0 },
        ] {
            let d = g.sample(200, 3, &mut rng).unwrap();
            assert_eq!((d.rows(), d.dim()), (200, 3));
            let mean0 = d.iter_rows().map(|r| r[0]).sum::<f64>() / 200.0;
            match g {
                Generator::Gaussian { .. } => assert!((mean0 - 2.0).abs() < 0.3),
                Generator::UniformCube { .. } => {
                    assert!(d.values().iter().all(|v| (2.0..3.0).contains(v)))
                }
                Generator::GaussianMixture { .. } => {
                    let far = d.iter_rows().filter(|r| r[0].abs() > 1.5).count();
                    assert!(far > 150);
                }
            }
        }
    }
}
