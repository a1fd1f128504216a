//! Statistics measuring departure of a one-dimensional sample from
//! symmetry about the origin.
//!
//! All of them are odd or even functionals of the sample: flipping every
//! sign negates the sign-CF and signed-rank statistics and leaves the KS
//! and h-functional statistics unchanged.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mid-distribution empirical cdf `F̂(x) = (#{s < x} + ½·#{s = x}) / m`.
///
/// With half weight at atoms an exactly sign-symmetric multiset satisfies
/// `F̂(x) = 1 − F̂(−x)` everywhere, including at the atoms themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptyDraws);
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.doubled_count(x) as f64 / (2 * self.sorted.len()) as f64
    }

    /// `2·#{s < x} + #{s = x}`, i.e. `2m·F̂(x)` in exact integer arithmetic.
    pub fn doubled_count(&self, x: f64) -> usize {
        let below = self.sorted.partition_point(|&v| v < x);
        let up_to = self.sorted.partition_point(|&v| v <= x);
        below + up_to
    }

    /// cdf of the reflected sample, `Ĝ(x) = 1 − F̂(−x)`.
    pub fn reflected(&self, x: f64) -> f64 {
        1.0 - self.eval(-x)
    }
}

/// Strictly convex, continuously differentiable `h` on `[0, 1]` with
/// `h(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HSpec {
    /// `h(u) = u^p`, `p > 1`.
    Power { p: f64 },
    /// `h(u) = e^u − 1`.
    ExpMinusOne,
}

impl Default for HSpec {
    fn default() -> Self {
        HSpec::Power { p: 2.0 }
    }
}

impl HSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            HSpec::Power { p } if p > 1.0 && p.is_finite() => Ok(()),
            HSpec::Power { p } => Err(Error::InvalidH(format!(
                "power exponent must be finite and > 1, got {p}"
            ))),
            HSpec::ExpMinusOne => Ok(()),
        }
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        match *self {
            HSpec::Power { p: 2.0 } => u * u,
            HSpec::Power { p } => u.powf(p),
            HSpec::ExpMinusOne => u.exp_m1(),
        }
    }

    /// Closed form of `2∫₀¹ h(u) du`.
    pub fn twice_integral(&self) -> f64 {
        match *self {
            HSpec::Power { p } => 2.0 / (p + 1.0),
            HSpec::ExpMinusOne => 2.0 * std::f64::consts::E - 4.0,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            HSpec::Power { p: 2.0 } => "power2".to_string(),
            HSpec::Power { p } => format!("power{p}"),
            HSpec::ExpMinusOne => "expm".to_string(),
        }
    }
}

fn nonempty(s: &[f64]) -> Result<()> {
    if s.is_empty() {
        Err(Error::EmptyDraws)
    } else {
        Ok(())
    }
}

/// `(1/m)·Σ sign(sᵢ)·exp(−sᵢ²/2)` with `sign(0) = 0`.
pub fn sign_cf_statistic(s: &[f64]) -> Result<f64> {
    nonempty(s)?;
    let total: f64 = s
        .iter()
        .map(|&v| {
            if v == 0.0 {
                0.0
            } else {
                v.signum() * (-0.5 * v * v).exp()
            }
        })
        .sum();
    Ok(total / s.len() as f64)
}

/// Centered Wilcoxon signed-rank statistic `W⁺ − N(N+1)/4`.
///
/// Zeros are dropped before ranking; tied magnitudes share their average
/// rank. Fails with [`Error::AllZeroDraws`] when nothing is left.
pub fn wilcoxon_signed_rank(s: &[f64]) -> Result<f64> {
    nonempty(s)?;
    let mut nonzero: Vec<f64> = s.iter().copied().filter(|&v| v != 0.0).collect();
    if nonzero.is_empty() {
        return Err(Error::AllZeroDraws);
    }
    nonzero.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let n = nonzero.len();
    let mut positive_ranks = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && nonzero[j].abs() == nonzero[i].abs() {
            j += 1;
        }
        // ranks i+1 ..= j share their mean
        let rank = (i + 1 + j) as f64 / 2.0;
        let positives = nonzero[i..j].iter().filter(|&&v| v > 0.0).count();
        positive_ranks += rank * positives as f64;
        i = j;
    }
    let n = n as f64;
    Ok(positive_ranks - n * (n + 1.0) / 4.0)
}

/// Plug-in estimate of `∫h(F)dG + ∫h(G)dF − 2∫₀¹h` for F the cdf of the
/// draws and `G(x) = 1 − F(−x)`.
///
/// The empirical measure of G puts mass `1/m` at each `−sᵢ`, so the first
/// integral is `(1/m)·Σ h(F̂(−sᵢ))` and the second `(1/m)·Σ h(Ĝ(sᵢ))`.
pub fn h_functional(s: &[f64], h: &HSpec) -> Result<f64> {
    nonempty(s)?;
    h.validate()?;
    let cdf = EmpiricalCdf::new(s)?;
    let total: f64 = s
        .iter()
        .map(|&v| h.eval(cdf.eval(-v)) + h.eval(cdf.reflected(v)))
        .sum();
    Ok(total / s.len() as f64 - h.twice_integral())
}

/// `sup_x |F̂(x) − Ĝ(x)|` over the whole line.
///
/// Both functions are step functions with jumps only at `±sᵢ`, so the
/// supremum is attained either at one of those points or on an open
/// interval between two consecutive ones; each interval is probed at its
/// midpoint. Counts are compared as integers, so sign-symmetric samples
/// give exactly zero.
pub fn ks_fg(s: &[f64]) -> Result<f64> {
    let cdf = EmpiricalCdf::new(s)?;
    let mut points: Vec<f64> = s.iter().flat_map(|&v| [v, -v]).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let two_m = 2 * s.len();
    // 2m·(F̂(x) − Ĝ(x)) = doubled(x) + doubled(−x) − 2m
    let gap = |x: f64| {
        (cdf.doubled_count(x) + cdf.doubled_count(-x)).abs_diff(two_m) as f64 / two_m as f64
    };
    let at_jumps = points.iter().map(|&x| gap(x));
    let between = points.windows(2).map(|w| gap(0.5 * (w[0] + w[1])));
    Ok(at_jumps.chain(between).fold(0.0, f64::max))
}

/// A statistic applied to S draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SymmetryStatistic {
    SignCf,
    Wilcoxon,
    #[serde(rename = "hfunc")]
    HFunctional { h: HSpec },
    KsFg,
}

impl SymmetryStatistic {
    pub fn name(&self) -> &'static str {
        match self {
            SymmetryStatistic::SignCf => "sign-cf",
            SymmetryStatistic::Wilcoxon => "wilcoxon",
            SymmetryStatistic::HFunctional { .. } => "hfunc",
            SymmetryStatistic::KsFg => "ks-fg",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SymmetryStatistic::HFunctional { h } => h.validate(),
            _ => Ok(()),
        }
    }

    pub fn compute(&self, s: &[f64]) -> Result<f64> {
        match self {
            SymmetryStatistic::SignCf => sign_cf_statistic(s),
            SymmetryStatistic::Wilcoxon => wilcoxon_signed_rank(s),
            SymmetryStatistic::HFunctional { h } => h_functional(s, h),
            SymmetryStatistic::KsFg => ks_fg(s),
        }
    }
}
