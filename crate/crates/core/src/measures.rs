//! Counting measures `tau(X_n) = (1/n) sum delta_{x_k}`: discrete energies and
//! potentials, the closeness functional `m_E`, the smoothed measures
//! `tau_n^r`, and moment distances to `mu_E`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::{dist_sq, powf};
use crate::reduce::{map_indices, pairwise_sum};
use crate::sets::MEMBERSHIP_TOL;
use crate::{CompactSet, EquilibriumOracle, Error, KernelSpec, PointConfig, RadialKernel, Result};

/// Sum over `k > row` of `k(x_row - x_k)`.
fn row_energy<K: RadialKernel>(coords: &[f64], dim: usize, row: usize, kernel: &K) -> Result<f64> {
    let n = coords.len() / dim;
    let xj = &coords[row * dim..(row + 1) * dim];
    let mut acc = 0.0;
    for k in row + 1..n {
        let r2 = dist_sq(xj, &coords[k * dim..(k + 1) * dim]);
        if r2 == 0.0 {
            return Err(Error::CoincidentPoints { first: row, second: k });
        }
        acc += kernel.at_sq_distance(r2);
    }
    Ok(acc)
}

/// `sum_{j<k} k(x_j - x_k)` over flat coordinates, reduced in a fixed tree.
pub(crate) fn pair_sum<K: RadialKernel + Sync>(coords: &[f64], dim: usize, kernel: &K) -> Result<f64> {
    let n = coords.len() / dim;
    let rows = map_indices(n, |j| row_energy(coords, dim, j, kernel));
    let rows: Vec<f64> = rows.into_iter().collect::<Result<_>>()?;
    Ok(pairwise_sum(&rows))
}

/// Pair sum together with its gradient with respect to every coordinate.
pub(crate) fn pair_sum_and_gradient<K: RadialKernel + Sync>(
    coords: &[f64],
    dim: usize,
    kernel: &K,
) -> Result<(f64, Vec<f64>)> {
    let n = coords.len() / dim;
    let rows = map_indices(n, |j| -> Result<(f64, Vec<f64>)> {
        let xj = &coords[j * dim..(j + 1) * dim];
        let mut upper = 0.0;
        let mut grad = alloc::vec![0.0; dim];
        for k in 0..n {
            if k == j {
                continue;
            }
            let xk = &coords[k * dim..(k + 1) * dim];
            let r2 = dist_sq(xj, xk);
            if r2 == 0.0 {
                return Err(Error::CoincidentPoints { first: j.min(k), second: j.max(k) });
            }
            if k > j {
                upper += kernel.at_sq_distance(r2);
            }
            let f = kernel.gradient_factor(r2);
            for ((g, a), b) in grad.iter_mut().zip(xj).zip(xk) {
                *g += f * (a - b);
            }
        }
        Ok((upper, grad))
    });
    let mut energies = Vec::with_capacity(n);
    let mut gradient = Vec::with_capacity(n * dim);
    for row in rows {
        let (e, g) = row?;
        energies.push(e);
        gradient.extend_from_slice(&g);
    }
    Ok((pairwise_sum(&energies), gradient))
}

fn normalization(n: usize) -> f64 {
    2.0 / (n as f64 * (n as f64 - 1.0))
}

/// Discrete energy `(2 / (n(n-1))) sum_{j<k} k(x_j - x_k)`.
///
/// Coincident points are an error rather than `+inf`. The result does not
/// depend on the number of rayon workers.
pub fn discrete_energy<K: RadialKernel + Sync>(x: &PointConfig, kernel: &K) -> Result<f64> {
    x.require_dim(kernel.dim())?;
    x.require_min_len(2)?;
    Ok(normalization(x.len()) * pair_sum(x.coords(), x.dim(), kernel)?)
}

/// Potential of the counting measure, `(1/n) sum_k k(y - x_k)`.
pub fn discrete_potential<K: RadialKernel>(x: &PointConfig, kernel: &K, y: &[f64]) -> Result<f64> {
    x.require_dim(kernel.dim())?;
    x.require_min_len(1)?;
    if y.len() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.len() });
    }
    let mut acc = 0.0;
    for p in x.iter() {
        let r2 = dist_sq(y, p);
        if r2 == 0.0 {
            return Err(Error::Singular);
        }
        acc += kernel.at_sq_distance(r2);
    }
    Ok(acc / x.len() as f64)
}

/// `m_E(X_n) = (1/n) sum_{x_k not in E} g_E(x_k)`; exactly zero when every
/// point is in `E` (membership up to [`MEMBERSHIP_TOL`]).
pub fn closeness_m_e(x: &PointConfig, set: &CompactSet, oracle: &EquilibriumOracle) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let total: f64 = x
        .iter()
        .filter(|p| set.distance(p) > MEMBERSHIP_TOL)
        .map(|p| oracle.green(p))
        .fold(0.0, |acc, g| acc + g);
    total / x.len() as f64
}

/// The smoothed measure `tau_n^r = (1/n) sum nu_k^r`, where `nu_k^r` is the
/// normalized surface measure of the sphere of radius `r` about `x_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothedConfig {
    base: PointConfig,
    radius: f64,
}

impl SmoothedConfig {
    pub fn new(base: PointConfig, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter("smoothing radius must be positive"));
        }
        Ok(SmoothedConfig { base, radius })
    }

    pub fn base(&self) -> &PointConfig {
        &self.base
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Newtonian potential of `tau_n^r`: `(1/n) sum max(r, |y - x_k|)^(2-d)`.
/// Finite everywhere.
pub fn smoothed_potential(s: &SmoothedConfig, kernel: &KernelSpec, y: &[f64]) -> Result<f64> {
    kernel.require_newtonian()?;
    s.base.require_dim(kernel.dim())?;
    s.base.require_min_len(1)?;
    let r2 = s.radius * s.radius;
    let total: f64 = s
        .base
        .iter()
        .map(|p| kernel.at_sq_distance(dist_sq(y, p).max(r2)))
        .sum();
    Ok(total / s.base.len() as f64)
}

/// Upper bound `((n-1)/n) I[tau_n] + r^(2-d)/n` for the self-energy of
/// `tau_n^r`.
pub fn smoothed_energy_terms(s: &SmoothedConfig, kernel: &KernelSpec) -> Result<f64> {
    kernel.require_newtonian()?;
    let n = s.base.len() as f64;
    let energy = discrete_energy(&s.base, kernel)?;
    Ok((n - 1.0) / n * energy + kernel.at_distance(s.radius) / n)
}

/// Coordinate monomials of total degree 1..=`degree`, as index lists.
fn monomials(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..dim).map(|i| alloc::vec![i]).collect();
    if degree >= 2 {
        for i in 0..dim {
            for j in i..dim {
                out.push(alloc::vec![i, j]);
            }
        }
    }
    out
}

fn monomial_means(points: &PointConfig, family: &[Vec<usize>]) -> Vec<f64> {
    family
        .iter()
        .map(|m| {
            let values: Vec<f64> = points.iter().map(|p| m.iter().map(|&i| p[i]).product()).collect();
            pairwise_sum(&values) / points.len() as f64
        })
        .collect()
}

/// Largest gap between the moments of `tau(X_n)` and Monte Carlo moments of
/// `mu_E` (`samples` draws under `seed`), over all coordinate monomials of
/// total degree at most `degree` (1 or 2).
pub fn moment_distance(
    x: &PointConfig,
    oracle: &EquilibriumOracle,
    degree: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if !(1..=2).contains(&degree) {
        return Err(Error::InvalidParameter("moment degree must be 1 or 2"));
    }
    x.require_dim(oracle.dim())?;
    x.require_min_len(1)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("moment sample count must be positive"));
    }
    let family = monomials(x.dim(), degree);
    let reference = oracle.sample(samples, seed)?;
    let ours = monomial_means(x, &family);
    let theirs = monomial_means(&reference, &family);
    Ok(ours
        .iter()
        .zip(&theirs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Distance from each point to its nearest neighbour.
pub fn nearest_neighbor_distances(x: &PointConfig) -> Vec<f64> {
    map_indices(x.len(), |j| {
        let xj = x.point(j);
        let best = x
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, p)| dist_sq(xj, p))
            .fold(f64::INFINITY, f64::min);
        powf(best, 0.5)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::equilibrium_oracle;
    use proptest::prelude::*;

    fn newton() -> KernelSpec {
        KernelSpec::newtonian(3).unwrap()
    }

    fn tetrahedron(edge: f64) -> PointConfig {
        let s = edge / (2.0 * 2f64.sqrt());
        PointConfig::from_points(
            3,
            [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]],
        )
        .unwrap()
    }

    #[test]
    fn energy_examples() {
        let pair = PointConfig::from_points(3, [[0.0; 3], [1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(discrete_energy(&pair, &newton()).unwrap(), 1.0);
        let e = discrete_energy(&tetrahedron(1.0), &newton()).unwrap();
        assert!((e - 1.0).abs() < 1e-14);
    }

    #[test]
    fn energy_errors() {
        let single = PointConfig::from_points(3, [[0.0; 3]]).unwrap();
        assert!(matches!(
            discrete_energy(&single, &newton()),
            Err(Error::TooFewPoints { .. })
        ));
        let twins = PointConfig::from_points(3, [[0.0; 3], [1.0, 0.0, 0.0], [0.0; 3]]).unwrap();
        assert_eq!(
            discrete_energy(&twins, &newton()),
            Err(Error::CoincidentPoints { first: 0, second: 2 })
        );
        let flat = PointConfig::from_points(2, [[0.0; 2], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            discrete_energy(&flat, &newton()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn potential_examples() {
        let one = PointConfig::from_points(3, [[0.0; 3]]).unwrap();
        assert_eq!(discrete_potential(&one, &newton(), &[2.0, 0.0, 0.0]).unwrap(), 0.5);
        assert_eq!(discrete_potential(&one, &newton(), &[0.0; 3]), Err(Error::Singular));
        let two = PointConfig::from_points(3, [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]).unwrap();
        let u = discrete_potential(&two, &newton(), &[0.0, 2.0, 0.0]).unwrap();
        assert!((u - 1.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn m_e_examples() {
        let set = CompactSet::unit_ball(3).unwrap();
        let oracle = equilibrium_oracle(&set, &newton()).unwrap();
        let inside = PointConfig::from_points(3, [[0.5, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(closeness_m_e(&inside, &set, &oracle), 0.0);
        let far = PointConfig::from_points(3, [[2.0, 0.0, 0.0]]).unwrap();
        assert_eq!(closeness_m_e(&far, &set, &oracle), 0.5);
        let mixed = PointConfig::from_points(3, [[0.0; 3], [0.0, 0.0, 2.0]]).unwrap();
        assert_eq!(closeness_m_e(&mixed, &set, &oracle), 0.25);
    }

    #[test]
    fn smoothed_examples() {
        let k = newton();
        let origin = PointConfig::from_points(3, [[0.0; 3]]).unwrap();
        let s = SmoothedConfig::new(origin.clone(), 1.0).unwrap();
        assert_eq!(smoothed_potential(&s, &k, &[0.0; 3]).unwrap(), 1.0);
        assert_eq!(smoothed_potential(&s, &k, &[2.0, 0.0, 0.0]).unwrap(), 0.5);
        let s = SmoothedConfig::new(origin, 0.1).unwrap();
        let u = smoothed_potential(&s, &k, &[0.05, 0.0, 0.0]).unwrap();
        assert!((u - 10.0).abs() < 1e-12);
        assert!(SmoothedConfig::new(PointConfig::empty(3), 0.0).is_err());
        let riesz = KernelSpec::new(1.0, 3).unwrap();
        let s = SmoothedConfig::new(PointConfig::from_points(3, [[0.0; 3]]).unwrap(), 1.0).unwrap();
        assert!(matches!(smoothed_potential(&s, &riesz, &[0.0; 3]), Err(Error::NotNewtonian { .. })));
    }

    #[test]
    fn smoothed_energy_examples() {
        let k = newton();
        let pair = PointConfig::from_points(3, [[0.0; 3], [1.0, 0.0, 0.0]]).unwrap();
        let s = SmoothedConfig::new(pair.clone(), 1.0).unwrap();
        assert_eq!(smoothed_energy_terms(&s, &k).unwrap(), 1.0);
        let s = SmoothedConfig::new(pair, 0.5).unwrap();
        assert_eq!(smoothed_energy_terms(&s, &k).unwrap(), 1.5);
        let s = SmoothedConfig::new(tetrahedron(1.0), 1.0).unwrap();
        assert!((smoothed_energy_terms(&s, &k).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn moments() {
        let set = CompactSet::unit_sphere(3).unwrap();
        let oracle = equilibrium_oracle(&set, &newton()).unwrap();
        let mirror = oracle.sample(5000, 9).unwrap();
        assert_eq!(moment_distance(&mirror, &oracle, 2, 5000, 9).unwrap(), 0.0);
        // the poles have zero first moments; second moments differ from mu_E
        let poles = PointConfig::from_points(3, [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]).unwrap();
        let d1 = moment_distance(&poles, &oracle, 1, 100_000, 1).unwrap();
        let d2 = moment_distance(&poles, &oracle, 2, 100_000, 1).unwrap();
        assert!(d1 < 0.01, "first moments {d1}");
        assert!((d2 - 2.0 / 3.0).abs() < 0.01, "second moments {d2}");
        assert!(moment_distance(&poles, &oracle, 3, 10, 1).is_err());
    }

    #[test]
    fn parallel_energy_is_bitwise_stable() {
        let set = CompactSet::unit_ball(3).unwrap();
        let x = crate::configurations::random_config(&set, 300, 17).unwrap();
        let k = newton();
        let reference = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| discrete_energy(&x, &k).unwrap());
        for workers in [2, 4, 8] {
            let e = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap()
                .install(|| discrete_energy(&x, &k).unwrap());
            assert_eq!(e.to_bits(), reference.to_bits());
        }
    }

    fn cloud(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-2.0f64..2.0, 3 * n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn scaling_law(coords in cloud(12), c in 0.2f64..5.0, alpha in 0.5f64..2.9) {
            let x = PointConfig::new(3, coords).unwrap();
            let k = KernelSpec::new(alpha, 3).unwrap();
            let e = discrete_energy(&x, &k).unwrap();
            let scaled = discrete_energy(&x.scaled(c), &k).unwrap();
            let expected = powf(c, alpha - 3.0) * e;
            prop_assert!((scaled - expected).abs() <= 1e-10 * expected);
        }

        #[test]
        fn permutation_then_sort_is_bitwise_stable(coords in cloud(15), seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            let x = PointConfig::new(3, coords).unwrap();
            let mut rows: Vec<Vec<f64>> = x.iter().map(|p| p.to_vec()).collect();
            rows.shuffle(&mut crate::rng::stream(seed, "perm"));
            let sort = |mut r: Vec<Vec<f64>>| {
                r.sort_by(|a, b| a.partial_cmp(b).unwrap());
                PointConfig::from_points(3, r).unwrap()
            };
            let original = sort(x.iter().map(|p| p.to_vec()).collect());
            let shuffled = sort(rows);
            let k = newton();
            prop_assert_eq!(
                discrete_energy(&original, &k).unwrap().to_bits(),
                discrete_energy(&shuffled, &k).unwrap().to_bits()
            );
        }

        #[test]
        fn permutation_invariance(coords in cloud(15), seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            let x = PointConfig::new(3, coords).unwrap();
            let mut rows: Vec<Vec<f64>> = x.iter().map(|p| p.to_vec()).collect();
            rows.shuffle(&mut crate::rng::stream(seed, "perm"));
            let y = PointConfig::from_points(3, rows).unwrap();
            let k = newton();
            let a = discrete_energy(&x, &k).unwrap();
            let b = discrete_energy(&y, &k).unwrap();
            prop_assert!((a - b).abs() <= 1e-13 * a);
        }

        #[test]
        fn smoothing_never_exceeds_the_point_potential(
            coords in cloud(10),
            y in proptest::collection::vec(-3.0f64..3.0, 3),
            r in 0.01f64..1.0,
        ) {
            let x = PointConfig::new(3, coords).unwrap();
            let k = newton();
            let s = SmoothedConfig::new(x.clone(), r).unwrap();
            let smooth = smoothed_potential(&s, &k, &y).unwrap();
            let plain = discrete_potential(&x, &k, &y).unwrap();
            prop_assert!(smooth <= plain + 1e-12 * plain);
            let nearest = x.iter().map(|p| dist_sq(p, &y)).fold(f64::INFINITY, f64::min);
            if nearest >= r * r {
                prop_assert!((smooth - plain).abs() <= 1e-12 * plain);
            }
        }

        #[test]
        fn m_e_is_bounded_by_robin(coords in proptest::collection::vec(-4.0f64..4.0, 30)) {
            let x = PointConfig::new(3, coords).unwrap();
            for set in [CompactSet::unit_ball(3).unwrap(), CompactSet::unit_sphere(3).unwrap()] {
                let oracle = equilibrium_oracle(&set, &newton()).unwrap();
                let m = closeness_m_e(&x, &set, &oracle);
                prop_assert!(m >= 0.0 && m <= oracle.robin_constant());
            }
        }
    }

    #[test]
    fn energy_of_points_on_a_line() {
        let x = PointConfig::from_points(3, [[0.0; 3], [1.0, 0.0, 0.0], [3.0, 0.0, 0.0]]).unwrap();
        // pairs at distances 1, 3, 2
        let expected = (1.0 + 1.0 / 3.0 + 0.5) / 3.0;
        assert!((discrete_energy(&x, &newton()).unwrap() - expected).abs() < 1e-15);
    }
}
