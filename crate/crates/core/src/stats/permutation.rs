//! Permutation calibration.
//!
//! Replicate `b` draws its randomness from `stream.child(b)`, so replicates
//! can be evaluated in any order or in parallel. Statistics are collected
//! in replicate order before counting.

use rand::seq::SliceRandom;
use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::energy::{energy_statistic, PooledEnergy};
use super::symmetry::SymmetryStatistic;
use crate::data::{validate_pair, Dataset};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::rng::RngStream;

/// Replicates within this relative distance of the observed statistic are
/// counted as ties (and therefore as exceedances).
pub const TIE_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test_name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub replicates: usize,
    pub seed: u64,
    pub alpha: f64,
    pub reject: bool,
}

impl TestReport {
    fn new(name: &str, statistic: f64, exceed: usize, b: usize, seed: u64, alpha: f64) -> Self {
        let p_value = (1 + exceed) as f64 / (b + 1) as f64;
        Self {
            test_name: name.to_string(),
            statistic,
            p_value,
            replicates: b,
            seed,
            alpha,
            reject: p_value <= alpha,
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn check_calibration(replicates: usize, alpha: f64) -> Result<()> {
    if replicates == 0 {
        return Err(Error::ZeroReplicates);
    }
    check_alpha(alpha)
}

/// Flips every sign independently with probability ½.
fn flip_signs(s: &[f64], stream: &RngStream) -> Vec<f64> {
    let mut rng = stream.rng();
    let mut out = Vec::with_capacity(s.len());
    for chunk in s.chunks(64) {
        let bits = rng.next_u64();
        out.extend(
            chunk
                .iter()
                .enumerate()
                .map(|(i, &v)| if bits >> i & 1 == 1 { -v } else { v }),
        );
    }
    out
}

/// Two-sided sign-flip test of symmetry about zero:
/// `p = (1 + #{|T_b| ≥ |T_obs|}) / (B + 1)`.
///
/// With the signed-rank statistic an all-zero sample has no statistic; the
/// report then carries statistic 0 and p = 1.
pub fn sign_flip_test(
    s: &[f64],
    stat: &SymmetryStatistic,
    replicates: usize,
    stream: &RngStream,
    alpha: f64,
) -> Result<TestReport> {
    check_calibration(replicates, alpha)?;
    stat.validate()?;
    let observed = match stat.compute(s) {
        Ok(v) => v,
        Err(Error::AllZeroDraws) => {
            return Ok(TestReport::new(stat.name(), 0.0, replicates, replicates, stream.seed, alpha))
        }
        Err(e) => return Err(e),
    };
    let permuted: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|b| stat.compute(&flip_signs(s, &stream.child(b))))
        .collect::<Result<_>>()?;
    let threshold = observed.abs() * (1.0 - TIE_RTOL) - TIE_RTOL;
    let exceed = permuted.iter().filter(|t| t.abs() >= threshold).count();
    Ok(TestReport::new(stat.name(), observed, exceed, replicates, stream.seed, alpha))
}

/// Right-tailed label-permutation test on the energy statistic.
///
/// Each replicate shuffles the pooled observations and relabels the first
/// `n` as X.
pub fn label_permutation_test(
    x: &Dataset,
    y: &Dataset,
    spec: &KernelSpec,
    replicates: usize,
    stream: &RngStream,
    alpha: f64,
) -> Result<TestReport> {
    check_calibration(replicates, alpha)?;
    validate_pair(x, y)?;
    let statistic = energy_statistic(x, y, spec)?;
    let pooled = PooledEnergy::new(x, y, spec)?;
    let n = x.rows() + y.rows();
    let identity: Vec<usize> = (0..n).collect();
    let observed = pooled.statistic(&identity);
    let permuted: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|b| {
            let mut order = identity.clone();
            order.shuffle(&mut stream.child(b).rng());
            pooled.statistic(&order)
        })
        .collect();
    let threshold = observed - TIE_RTOL * pooled.scale();
    let exceed = permuted.iter().filter(|&&t| t >= threshold).count();
    Ok(TestReport::new("energy", statistic, exceed, replicates, stream.seed, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;
    use crate::stats::HSpec;

    fn all_stats() -> [SymmetryStatistic; 4] {
        [
            SymmetryStatistic::SignCf,
            SymmetryStatistic::Wilcoxon,
            SymmetryStatistic::HFunctional { h: HSpec::default() },
            SymmetryStatistic::KsFg,
        ]
    }

    #[test]
    fn zeros_give_p_one() {
        for stat in all_stats() {
            let r = sign_flip_test(&[0.0; 6], &stat, 49, &derive_stream(1, 0), 0.05).unwrap();
            assert_eq!(r.p_value, 1.0, "{}", stat.name());
            assert!(!r.reject);
        }
    }

    #[test]
    fn p_value_bounds_and_determinism() {
        let s: Vec<f64> = (0..30).map(|i| (i as f64 * 1.7).sin() + 0.4).collect();
        for stat in all_stats() {
            let a = sign_flip_test(&s, &stat, 199, &derive_stream(4, 2), 0.05).unwrap();
            let b = sign_flip_test(&s, &stat, 199, &derive_stream(4, 2), 0.05).unwrap();
            assert_eq!(a, b);
            assert!(a.p_value >= 1.0 / 200.0 && a.p_value <= 1.0);
            assert_eq!(a.reject, a.p_value <= 0.05);
        }
    }

    #[test]
    fn shifted_sample_rejected() {
        let s: Vec<f64> = (0..40).map(|i| 1.0 + 0.1 * (i as f64).sin()).collect();
        for stat in all_stats() {
            let r = sign_flip_test(&s, &stat, 199, &derive_stream(0, 0), 0.05).unwrap();
            assert!(r.reject, "{} p = {}", stat.name(), r.p_value);
            assert_eq!(r.p_value, 1.0 / 200.0);
        }
    }

    #[test]
    fn calibration_errors() {
        let st = derive_stream(0, 0);
        assert_eq!(
            sign_flip_test(&[1.0], &SymmetryStatistic::SignCf, 0, &st, 0.05),
            Err(Error::ZeroReplicates)
        );
        assert_eq!(
            sign_flip_test(&[], &SymmetryStatistic::SignCf, 9, &st, 0.05),
            Err(Error::EmptyDraws)
        );
        assert_eq!(
            sign_flip_test(&[1.0], &SymmetryStatistic::SignCf, 9, &st, 1.0),
            Err(Error::InvalidAlpha(1.0))
        );
        let x = Dataset::from_rows(&[[0.0]]).unwrap();
        let y = Dataset::from_rows(&[[0.0, 1.0]]).unwrap();
        assert_eq!(
            label_permutation_test(&x, &x, &KernelSpec::EuclideanNorm, 0, &st, 0.05),
            Err(Error::ZeroReplicates)
        );
        assert!(matches!(
            label_permutation_test(&x, &y, &KernelSpec::EuclideanNorm, 9, &st, 0.05),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn identical_samples_give_p_one() {
        let x = Dataset::new(6, 2, (0..12).map(|v| (v as f64 * 0.9).sin()).collect()).unwrap();
        let y = x.select(&[5, 4, 3, 2, 1, 0]).unwrap();
        for spec in [KernelSpec::EuclideanNorm, KernelSpec::GaussianSnd { scale: 1.0 }] {
            let r = label_permutation_test(&x, &y, &spec, 99, &derive_stream(2, 2), 0.05).unwrap();
            assert_eq!(r.statistic, 0.0);
            assert_eq!(r.p_value, 1.0);
        }
        let one = Dataset::from_rows(&[[1.0, 2.0]]).unwrap();
        let r = label_permutation_test(&one, &one, &KernelSpec::EuclideanNorm, 9, &derive_stream(0, 0), 0.05)
            .unwrap();
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn energy_determinism_and_power() {
        let x = Dataset::new(20, 2, (0..40).map(|v| (v as f64 * 0.77).sin()).collect()).unwrap();
        let y = Dataset::new(25, 2, (0..50).map(|v| 3.0 + (v as f64 * 0.31).cos()).collect()).unwrap();
        let st = derive_stream(8, 1);
        let a = label_permutation_test(&x, &y, &KernelSpec::EuclideanNorm, 199, &st, 0.05).unwrap();
        let b = label_permutation_test(&x, &y, &KernelSpec::EuclideanNorm, 199, &st, 0.05).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.p_value, 1.0 / 200.0);
        assert!(a.reject);
    }
}
