//! Exact laws for finitely supported inputs.
//!
//! When X and Y take finitely many values, the law of S is a finite
//! mixture that can be enumerated outright. These routines are the ground
//! truth the sampling code is checked against.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;

/// Tolerance for probabilities summing to one.
pub const PROB_TOL: f64 = 1e-12;
/// Atoms of a [`Pmf1D`] closer than this are merged.
pub const MERGE_TOL: f64 = 1e-12;
/// Default cap on `|px|²·|py|²`, the number of `(X, X′, Y, Y′)` tuples
/// visited by [`exact_s_pmf`] (each tuple is paired with the four coin
/// outcomes).
pub const DEFAULT_TERM_CAP: u128 = 64 * 64 * 64 * 64;

/// A probability distribution on finitely many points of `ℝᵈ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDist", into = "RawDist")]
pub struct DiscreteDist {
    support: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawDist {
    support: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

impl TryFrom<RawDist> for DiscreteDist {
    type Error = Error;

    fn try_from(raw: RawDist) -> Result<Self> {
        DiscreteDist::new(raw.support, raw.probs)
    }
}

impl From<DiscreteDist> for RawDist {
    fn from(d: DiscreteDist) -> Self {
        RawDist {
            support: d.support,
            probs: d.probs,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDistribution(msg.into())
}

impl DiscreteDist {
    pub fn new(support: Vec<Vec<f64>>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(invalid("empty support"));
        }
        if support.len() != probs.len() {
            return Err(invalid(format!(
                "{} support points but {} probabilities",
                support.len(),
                probs.len()
            )));
        }
        let dim = support[0].len();
        if dim == 0 {
            return Err(invalid("support points have no coordinates"));
        }
        for p in &support {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(invalid("non-finite support coordinate"));
            }
        }
        for (i, a) in support.iter().enumerate() {
            if support[..i].contains(a) {
                return Err(invalid(format!("support point {i} is repeated")));
            }
        }
        if probs.iter().any(|&q| !(q > 0.0 && q.is_finite())) {
            return Err(invalid("probabilities must be positive"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(invalid(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { support, probs })
    }

    pub fn point_mass(point: Vec<f64>) -> Result<Self> {
        Self::new(vec![point], vec![1.0])
    }

    pub fn dim(&self) -> usize {
        self.support[0].len()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[Vec<f64>] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Same points (in any order) with probabilities within `tol`.
    pub fn same_law(&self, other: &DiscreteDist, tol: f64) -> bool {
        self.len() == other.len()
            && self.support.iter().zip(&self.probs).all(|(p, q)| {
                other
                    .support
                    .iter()
                    .position(|o| o == p)
                    .is_some_and(|j| (other.probs[j] - q).abs() <= tol)
            })
    }

    /// `n` independent draws.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Dataset> {
        let mut cumulative = Vec::with_capacity(self.len());
        let mut acc = 0.0;
        for q in &self.probs {
            acc += q;
            cumulative.push(acc);
        }
        let mut values = Vec::with_capacity(n * self.dim());
        for _ in 0..n {
            let u: f64 = rng.random::<f64>() * acc;
            let k = cumulative
                .partition_point(|&c| c <= u)
                .min(self.len() - 1);
            values.extend_from_slice(&self.support[k]);
        }
        Dataset::new(n, self.dim(), values)
    }
}

/// Finitely supported law on the real line. Atoms are sorted and pairwise
/// more than [`MERGE_TOL`] apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pmf1D {
    atoms: Vec<(f64, f64)>,
}

impl Pmf1D {
    /// Collects weighted values, merging equal and near-equal ones.
    pub fn from_weighted<I: IntoIterator<Item = (f64, f64)>>(items: I) -> Result<Self> {
        // exact merge first, in first-seen order so sums are reproducible
        let mut slot: HashMap<u64, usize> = HashMap::new();
        let mut exact: Vec<(f64, f64)> = Vec::new();
        for (v, q) in items {
            if !v.is_finite() || !q.is_finite() || q < 0.0 {
                return Err(invalid("atoms must be finite with nonnegative mass"));
            }
            if q == 0.0 {
                continue;
            }
            let v = v + 0.0; // −0 → +0
            match slot.get(&v.to_bits()) {
                Some(&i) => exact[i].1 += q,
                None => {
                    slot.insert(v.to_bits(), exact.len());
                    exact.push((v, q));
                }
            }
        }
        exact.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(exact.len());
        let mut anchor = f64::NEG_INFINITY;
        for (v, q) in exact {
            match atoms.last_mut() {
                Some(last) if v - anchor <= MERGE_TOL => last.1 += q,
                _ => {
                    anchor = v;
                    atoms.push((v, q));
                }
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(invalid(format!("masses sum to {total}, not 1")));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Mass of the atom within [`MERGE_TOL`] of `v`, zero if none.
    pub fn mass_at(&self, v: f64) -> f64 {
        self.atoms
            .iter()
            .find(|a| (a.0 - v).abs() <= MERGE_TOL)
            .map_or(0.0, |a| a.1)
    }

    /// `P(V ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms.iter().take_while(|a| a.0 <= x).map(|a| a.1).sum()
    }

    /// `(P(V ≥ 0), P(V ≤ 0))`, treating atoms within [`MERGE_TOL`] of zero
    /// as zero.
    pub fn median_masses(&self) -> (f64, f64) {
        let nonneg = self.atoms.iter().filter(|a| a.0 >= -MERGE_TOL).map(|a| a.1).sum();
        let nonpos = self.atoms.iter().filter(|a| a.0 <= MERGE_TOL).map(|a| a.1).sum();
        (nonneg, nonpos)
    }

    /// Same atoms with masses within `tol`.
    pub fn approx_eq(&self, other: &Pmf1D, tol: f64) -> bool {
        let covers = |a: &Pmf1D, b: &Pmf1D| a.atoms.iter().all(|&(v, q)| (b.mass_at(v) - q).abs() <= tol);
        covers(self, other) && covers(other, self)
    }
}

fn check_dims(px: &DiscreteDist, py: &DiscreteDist) -> Result<()> {
    if px.dim() != py.dim() {
        return Err(Error::DimensionMismatch {
            expected: px.dim(),
            found: py.dim(),
        });
    }
    Ok(())
}

fn table(a: &DiscreteDist, b: &DiscreteDist, spec: &KernelSpec) -> Vec<Vec<f64>> {
    a.support
        .iter()
        .map(|p| b.support.iter().map(|q| spec.eval(p, q)).collect())
        .collect()
}

/// Exact law of S with the default enumeration cap.
pub fn exact_s_pmf(px: &DiscreteDist, py: &DiscreteDist, spec: &KernelSpec) -> Result<Pmf1D> {
    exact_s_pmf_with_cap(px, py, spec, DEFAULT_TERM_CAP)
}

/// Exact law of S by visiting every `(X, X′, Y, Y′, ε, δ)` outcome.
pub fn exact_s_pmf_with_cap(
    px: &DiscreteDist,
    py: &DiscreteDist,
    spec: &KernelSpec,
    cap: u128,
) -> Result<Pmf1D> {
    check_dims(px, py)?;
    spec.validate()?;
    let (nx, ny) = (px.len() as u128, py.len() as u128);
    let terms = nx * nx * ny * ny;
    if terms > cap {
        return Err(Error::SupportTooLarge { terms, cap });
    }
    let dxy = table(px, py, spec);
    let dxx = table(px, px, spec);
    let dyy = table(py, py, spec);
    let mut outcomes = Vec::new();
    for (i, &pi) in px.probs.iter().enumerate() {
        for (j, &pj) in px.probs.iter().enumerate() {
            for (k, &qk) in py.probs.iter().enumerate() {
                for (l, &ql) in py.probs.iter().enumerate() {
                    let w = 0.25 * pi * pj * qk * ql;
                    for eps in [false, true] {
                        for delta in [false, true] {
                            let v = if delta {
                                dxy[i][k]
                            } else if eps {
                                -dxx[i][j]
                            } else {
                                -dyy[k][l]
                            };
                            outcomes.push((v, w));
                        }
                    }
                }
            }
            if outcomes.len() > 1 << 20 {
                outcomes = compact(outcomes);
            }
        }
    }
    Pmf1D::from_weighted(outcomes)
}

// Merges exactly repeated values so the outcome buffer stays small.
fn compact(outcomes: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut slot: HashMap<u64, usize> = HashMap::new();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (v, q) in outcomes {
        let v = v + 0.0;
        match slot.get(&v.to_bits()) {
            Some(&i) => out[i].1 += q,
            None => {
                slot.insert(v.to_bits(), out.len());
                out.push((v, q));
            }
        }
    }
    out
}

/// Law of `d(A, B)` for independent `A ~ pa`, `B ~ pb`.
pub fn distance_law(pa: &DiscreteDist, pb: &DiscreteDist, spec: &KernelSpec) -> Result<Pmf1D> {
    check_dims(pa, pb)?;
    spec.validate()?;
    let mut items = Vec::with_capacity(pa.len() * pb.len());
    for (p, &wp) in pa.support.iter().zip(&pa.probs) {
        for (q, &wq) in pb.support.iter().zip(&pb.probs) {
            items.push((spec.eval(p, q), wp * wq));
        }
    }
    Pmf1D::from_weighted(items)
}

/// Characteristic function `Σ q·exp(i·t·v)`.
pub fn exact_cf(p: &Pmf1D, t: f64) -> Complex64 {
    p.atoms
        .iter()
        .map(|&(v, q)| Complex64::from_polar(q, t * v))
        .sum()
}

/// Largest deviation over `grid` between the characteristic function of S
/// and `½f₁(t) + ¼(f₂(−t) + f₃(−t))`, where f₁, f₂, f₃ are the
/// characteristic functions of `d(X, Y)`, `d(X, X′)` and `d(Y, Y′)`
/// computed separately.
pub fn cf_identity_check(
    px: &DiscreteDist,
    py: &DiscreteDist,
    spec: &KernelSpec,
    grid: &[f64],
) -> Result<f64> {
    let s = exact_s_pmf(px, py, spec)?;
    let f1 = distance_law(px, py, spec)?;
    let f2 = distance_law(px, px, spec)?;
    let f3 = distance_law(py, py, spec)?;
    Ok(grid
        .iter()
        .map(|&t| {
            let rhs = 0.5 * exact_cf(&f1, t) + 0.25 * (exact_cf(&f2, -t) + exact_cf(&f3, -t));
            (exact_cf(&s, t) - rhs).norm()
        })
        .fold(0.0, f64::max))
}

/// Whether every nonzero atom `v` has a mirror atom at `−v` with mass
/// within `tol`.
pub fn symmetry_verdict(p: &Pmf1D, tol: f64) -> bool {
    p.atoms
        .iter()
        .filter(|a| a.0.abs() > MERGE_TOL)
        .all(|&(v, q)| {
            p.atoms
                .iter()
                .any(|&(w, r)| (w + v).abs() <= MERGE_TOL && (r - q).abs() <= tol)
        })
}

/// Laws of the between-sample distance `d(X, Y)` and of the ε-mixture
/// `ε·d(X, X′) + (1 − ε)·d(Y, Y′)`.
pub fn between_within_laws(
    px: &DiscreteDist,
    py: &DiscreteDist,
    spec: &KernelSpec,
) -> Result<(Pmf1D, Pmf1D)> {
    let between = distance_law(px, py, spec)?;
    let wx = distance_law(px, px, spec)?;
    let wy = distance_law(py, py, spec)?;
    let mixed = wx
        .atoms
        .iter()
        .chain(&wy.atoms)
        .map(|&(v, q)| (v, 0.5 * q));
    Ok((between, Pmf1D::from_weighted(mixed)?))
}

/// `E L(X, Y) − ½(E L(X, X′) + E L(Y, Y′))` summed over the supports.
pub fn population_energy(px: &DiscreteDist, py: &DiscreteDist, spec: &KernelSpec) -> Result<f64> {
    check_dims(px, py)?;
    spec.validate()?;
    let expect = |a: &DiscreteDist, b: &DiscreteDist| -> f64 {
        let mut acc = 0.0;
        for (p, &wp) in a.support.iter().zip(&a.probs) {
            for (q, &wq) in b.support.iter().zip(&b.probs) {
                acc += wp * wq * spec.eval(p, q);
            }
        }
        acc
    };
    Ok(expect(px, py) - 0.5 * (expect(px, px) + expect(py, py)))
}

/// Kolmogorov distance between the empirical law of `sample` and `p`.
pub fn ks_distance(p: &Pmf1D, sample: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptyDraws);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let jumps = p.atoms.iter().map(|a| a.0).chain(sorted.iter().copied());
    Ok(jumps
        .map(|x| {
            let emp = sorted.partition_point(|&v| v <= x) as f64 / n;
            (emp - p.cdf(x)).abs()
        })
        .fold(0.0, f64::max))
}

/// A pair of small discrete laws with a known answer to "are they equal?".
#[derive(Debug, Clone)]
pub struct CuratedPair {
    pub name: String,
    pub px: DiscreteDist,
    pub py: DiscreteDist,
    pub equal: bool,
}

/// Hand-picked pairs in dimensions 1 to 3 with at most four support
/// points: point masses, two-, three- and four-point laws, each as an
/// equal pair and as a pair that differs by moving 0.05 of mass (or, for
/// point masses, by moving the point).
pub fn curated_family() -> Vec<CuratedPair> {
    let mut out = Vec::new();
    for d in 1..=3usize {
        let pt = |coords: &[f64]| -> Vec<f64> { (0..d).map(|k| coords[k % coords.len()]).collect() };
        let a = pt(&[0.0, 0.5, -1.0]);
        let b = pt(&[1.0, -0.25, 2.0]);
        let c = pt(&[-1.5, 2.0, 0.75]);
        let e = pt(&[0.3, 1.2, -0.6]);
        let e = if d == 1 { vec![2.5] } else { e };
        let dist = |pts: &[&Vec<f64>], probs: &[f64]| {
            DiscreteDist::new(pts.iter().map(|p| (*p).clone()).collect(), probs.to_vec())
                .expect("curated distribution is valid")
        };
        let mut push = |name: &str, px: DiscreteDist, py: DiscreteDist, equal: bool| {
            out.push(CuratedPair {
                name: format!("{name}/d{d}"),
                px,
                py,
                equal,
            });
        };
        push("point-equal", dist(&[&a], &[1.0]), dist(&[&a], &[1.0]), true);
        push("point-moved", dist(&[&a], &[1.0]), dist(&[&b], &[1.0]), false);
        push(
            "two-equal",
            dist(&[&a, &b], &[0.5, 0.5]),
            dist(&[&b, &a], &[0.5, 0.5]),
            true,
        );
        push(
            "two-perturbed",
            dist(&[&a, &b], &[0.5, 0.5]),
            dist(&[&a, &b], &[0.55, 0.45]),
            false,
        );
        push(
            "three-equal",
            dist(&[&a, &b, &c], &[0.2, 0.3, 0.5]),
            dist(&[&a, &b, &c], &[0.2, 0.3, 0.5]),
            true,
        );
        push(
            "three-perturbed",
            dist(&[&a, &b, &c], &[0.2, 0.3, 0.5]),
            dist(&[&a, &b, &c], &[0.25, 0.25, 0.5]),
            false,
        );
        push(
            "four-equal",
            dist(&[&a, &b, &c, &e], &[0.1, 0.2, 0.3, 0.4]),
            dist(&[&e, &c, &b, &a], &[0.4, 0.3, 0.2, 0.1]),
            true,
        );
        push(
            "four-perturbed",
            dist(&[&a, &b, &c, &e], &[0.1, 0.2, 0.3, 0.4]),
            dist(&[&a, &b, &c, &e], &[0.1, 0.2, 0.35, 0.35]),
            false,
        );
    }
    out
}
