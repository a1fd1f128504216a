//! Kernel energy statistic
//! `E L(X, Y) − ½·(E L(X, X′) + E L(Y, Y′))` with empirical measures
//! plugged in (V-statistic: all pairs, diagonals included).

use crate::data::{validate_pair, Dataset};
use crate::error::Result;
use crate::kernels::{pairwise, KernelSpec, PairwiseMatrix};

/// Sum that does not depend on the order of `values`.
///
/// Sorting first makes the sum a function of the multiset, which is what
/// gives an exact zero when the two samples are equal as multisets.
fn multiset_sum(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum()
}

fn mean_kernel(a: &Dataset, b: &Dataset, spec: &KernelSpec) -> Result<f64> {
    let m = pairwise(a, b, spec)?;
    let n = (m.rows() * m.cols()) as f64;
    Ok(multiset_sum(m.values().to_vec()) / n)
}

/// Energy statistic of `x` against `y` under `spec`.
pub fn energy_statistic(x: &Dataset, y: &Dataset, spec: &KernelSpec) -> Result<f64> {
    validate_pair(x, y)?;
    let between = mean_kernel(x, y, spec)?;
    let within_x = mean_kernel(x, x, spec)?;
    let within_y = mean_kernel(y, y, spec)?;
    Ok(between - 0.5 * (within_x + within_y))
}

/// Energy statistics of many relabelings of one pooled sample.
///
/// Holds the pooled kernel matrix so each relabeling costs
/// `O(n² + m²)` additions instead of fresh kernel evaluations.
pub(crate) struct PooledEnergy {
    matrix: PairwiseMatrix,
    total: f64,
    n_x: usize,
}

impl PooledEnergy {
    pub(crate) fn new(x: &Dataset, y: &Dataset, spec: &KernelSpec) -> Result<Self> {
        let pooled = x.concat(y)?;
        let matrix = pairwise(&pooled, &pooled, spec)?;
        let total = matrix.values().iter().sum();
        Ok(Self {
            matrix,
            total,
            n_x: x.rows(),
        })
    }

    /// Largest kernel value; the natural scale for tie tolerances.
    pub(crate) fn scale(&self) -> f64 {
        self.matrix.values().iter().copied().fold(0.0, f64::max)
    }

    fn block_sum(&self, idx: &[usize]) -> f64 {
        idx.iter()
            .map(|&i| {
                let row = self.matrix.row(i);
                idx.iter().map(|&j| row[j]).sum::<f64>()
            })
            .sum()
    }

    /// Statistic when `order[..n_x]` is labelled X and the rest Y.
    pub(crate) fn statistic(&self, order: &[usize]) -> f64 {
        let (xi, yi) = order.split_at(self.n_x);
        let sxx = self.block_sum(xi);
        let syy = self.block_sum(yi);
        let sxy = 0.5 * (self.total - sxx - syy);
        let n = xi.len() as f64;
        let m = yi.len() as f64;
        sxy / (n * m) - 0.5 * (sxx / (n * n) + syy / (m * m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use proptest::prelude::*;

    fn brute_force(x: &[Vec<f64>], y: &[Vec<f64>], spec: &KernelSpec) -> f64 {
        let mean = |a: &[Vec<f64>], b: &[Vec<f64>]| {
            let mut acc = 0.0;
            for p in a {
                for q in b {
                    acc += spec.apply(p, q).unwrap();
                }
            }
            acc / (a.len() * b.len()) as f64
        };
        mean(x, y) - 0.5 * (mean(x, x) + mean(y, y))
    }

    #[test]
    fn point_masses_closed_form() {
        let x = Dataset::from_rows(&[[0.0]]).unwrap();
        let y = Dataset::from_rows(&[[1.0]]).unwrap();
        let spec = KernelSpec::GaussianSnd { scale: 1.0 };
        let e = energy_statistic(&x, &y, &spec).unwrap();
        assert!((e - (1.0 - (-0.5f64).exp())).abs() < 1e-15);
        assert!((e - 0.393469).abs() < 1e-6);
    }

    #[test]
    fn permuted_multiset_is_exactly_zero() {
        let x = Dataset::from_rows(&[[0.1, 2.0], [3.3, -1.0], [0.7, 0.7], [0.1, 2.0]]).unwrap();
        let y = x.select(&[2, 0, 3, 1]).unwrap();
        for spec in [KernelSpec::EuclideanNorm, KernelSpec::GaussianSnd { scale: 0.7 }] {
            assert_eq!(energy_statistic(&x, &y, &spec).unwrap(), 0.0);
            assert_eq!(energy_statistic(&x, &x, &spec).unwrap(), 0.0);
        }
    }

    #[test]
    fn errors() {
        let x = Dataset::from_rows(&[[0.0]]).unwrap();
        let y = Dataset::from_rows(&[[0.0, 1.0]]).unwrap();
        assert!(matches!(
            energy_statistic(&x, &y, &KernelSpec::EuclideanNorm),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pooled_identity_split_matches() {
        let x = Dataset::new(5, 2, (0..10).map(|v| (v as f64).sin()).collect()).unwrap();
        let y = Dataset::new(7, 2, (0..14).map(|v| (v as f64).cos()).collect()).unwrap();
        let spec = KernelSpec::EuclideanNorm;
        let pooled = PooledEnergy::new(&x, &y, &spec).unwrap();
        let order: Vec<usize> = (0..12).collect();
        let direct = energy_statistic(&x, &y, &spec).unwrap();
        assert!((pooled.statistic(&order) - direct).abs() < 1e-13);
    }

    fn rows(d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(-4.0f64..4.0, d), 1..8)
    }

    proptest! {
        #[test]
        fn matches_double_loop(
            (xs, ys) in (1usize..4).prop_flat_map(|d| (rows(d), rows(d))),
            scale in 0.3f64..3.0,
        ) {
            let x = Dataset::from_rows(&xs).unwrap();
            let y = Dataset::from_rows(&ys).unwrap();
            for spec in [KernelSpec::EuclideanNorm, KernelSpec::GaussianSnd { scale }] {
                let e = energy_statistic(&x, &y, &spec).unwrap();
                prop_assert!((e - brute_force(&xs, &ys, &spec)).abs() < 1e-12);
                prop_assert!(e >= -1e-12);
            }
        }
    }
}
