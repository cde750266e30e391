use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{unit_vector, CompactSet, Shape};
use crate::configurations::{fekete_search, FeketeSearchParams};
use crate::math::{dist, dist_sq, powf};
use crate::measures::nearest_neighbor_distances;
use crate::rng::stream;
use crate::{Error, KernelSpec, PointConfig, Result};

/// Equilibrium data of a set for the Newtonian kernel: Robin constant `W(E)`,
/// equilibrium potential `U^{mu_E}`, Green function `g_E = W(E) - U^{mu_E}`,
/// and a sampler for `mu_E`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EquilibriumOracle {
    /// Exact oracle for a ball or sphere of radius `R`: `mu_E` is the uniform
    /// measure on the sphere, `W = R^(2-d)`, `U(x) = max(|x - c|, R)^(2-d)`.
    Spherical {
        center: Vec<f64>,
        radius: f64,
        dim: usize,
    },
    /// Approximation by a computed Fekete configuration (labelled approximate).
    Discrete(DiscreteEquilibrium),
}

/// `mu_E` approximated by `tau(F_n)`; potentials are smoothed at radius
/// `smoothing` so they stay finite at the support points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteEquilibrium {
    set: CompactSet,
    support: PointConfig,
    smoothing: f64,
    robin: f64,
}

/// Settings for the Fekete-backed approximate oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproximationOptions {
    pub n: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for ApproximationOptions {
    fn default() -> Self {
        ApproximationOptions {
            n: 400,
            max_iters: 400,
            seed: 0,
        }
    }
}

/// Builds the equilibrium oracle of `set` for `kernel`.
///
/// Balls and spheres get the exact oracle. Boxes and unions get
/// [`DiscreteEquilibrium`] with default options. Non-Newtonian kernels are
/// unsupported.
pub fn equilibrium_oracle(set: &CompactSet, kernel: &KernelSpec) -> Result<EquilibriumOracle> {
    if !kernel.is_newtonian() {
        return Err(Error::UnsupportedOracle);
    }
    if kernel.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: kernel.dim(),
        });
    }
    match set.shape() {
        Shape::Ball { center, radius } | Shape::Sphere { center, radius } => {
            Ok(EquilibriumOracle::Spherical {
                center: center.clone(),
                radius: *radius,
                dim: set.dim(),
            })
        }
        _ => DiscreteEquilibrium::build(set, kernel, ApproximationOptions::default())
            .map(EquilibriumOracle::Discrete),
    }
}

impl DiscreteEquilibrium {
    /// Runs a Fekete search of size `options.n` and calibrates `W` as the
    /// largest smoothed potential seen on the support and on a candidate grid.
    pub fn build(set: &CompactSet, kernel: &KernelSpec, options: ApproximationOptions) -> Result<Self> {
        kernel.require_newtonian()?;
        let mut params = FeketeSearchParams::new(options.n, options.seed);
        params.restarts = 1;
        params.max_iters = options.max_iters;
        let support = fekete_search(set, kernel, &params)?.config;
        let spacing = nearest_neighbor_distances(&support);
        let smoothing = 0.5 * spacing.iter().sum::<f64>() / spacing.len() as f64;
        let mut out = DiscreteEquilibrium {
            set: set.clone(),
            support,
            smoothing,
            robin: 0.0,
        };
        let grid = set.sample_candidates(2000, options.seed)?;
        out.robin = out
            .support
            .iter()
            .chain(grid.iter())
            .map(|p| out.smoothed_potential(p))
            .fold(0.0, f64::max);
        Ok(out)
    }

    pub fn support(&self) -> &PointConfig {
        &self.support
    }

    fn smoothed_potential(&self, x: &[f64]) -> f64 {
        let exponent = 2.0 - self.set.dim() as f64;
        let r2min = self.smoothing * self.smoothing;
        let total: f64 = self
            .support
            .iter()
            .map(|p| powf(dist_sq(x, p).max(r2min), 0.5 * exponent))
            .sum();
        total / self.support.len() as f64
    }

    fn green(&self, x: &[f64]) -> f64 {
        if self.set.contains(x) {
            0.0
        } else {
            (self.robin - self.smoothed_potential(x)).max(0.0)
        }
    }
}

impl EquilibriumOracle {
    pub fn dim(&self) -> usize {
        match self {
            EquilibriumOracle::Spherical { dim, .. } => *dim,
            EquilibriumOracle::Discrete(d) => d.set.dim(),
        }
    }

    /// True for the Fekete-backed approximation.
    pub fn is_approximate(&self) -> bool {
        matches!(self, EquilibriumOracle::Discrete(_))
    }

    /// Robin constant `W(E)`.
    pub fn robin_constant(&self) -> f64 {
        match self {
            EquilibriumOracle::Spherical { radius, dim, .. } => newtonian(*dim).at_distance(*radius),
            EquilibriumOracle::Discrete(d) => d.robin,
        }
    }

    /// Equilibrium potential `U^{mu_E}(x)`.
    pub fn potential(&self, x: &[f64]) -> f64 {
        match self {
            EquilibriumOracle::Spherical { center, radius, dim } => {
                newtonian(*dim).at_distance(dist(x, center).max(*radius))
            }
            EquilibriumOracle::Discrete(d) => d.robin - d.green(x),
        }
    }

    /// Green function `g_E(x) = W(E) - U^{mu_E}(x)`.
    pub fn green(&self, x: &[f64]) -> f64 {
        match self {
            EquilibriumOracle::Spherical { center, radius, dim } => {
                let rho = dist(x, center);
                if rho <= *radius {
                    0.0
                } else {
                    let k = newtonian(*dim);
                    k.at_distance(*radius) - k.at_distance(rho)
                }
            }
            EquilibriumOracle::Discrete(d) => d.green(x),
        }
    }

    /// One draw from `mu_E`.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            EquilibriumOracle::Spherical { center, radius, dim } => {
                let u = unit_vector(*dim, rng);
                center.iter().zip(&u).map(|(c, ui)| c + radius * ui).collect()
            }
            EquilibriumOracle::Discrete(d) => {
                let i = rng.random_range(0..d.support.len());
                d.support.point(i).to_vec()
            }
        }
    }

    /// `count` independent draws from `mu_E`, deterministic in `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Result<PointConfig> {
        let mut rng = stream(seed, "equilibrium");
        let mut out = PointConfig::empty(self.dim());
        for _ in 0..count {
            out.push(&self.sample_point(&mut rng))?;
        }
        Ok(out)
    }
}

fn newtonian(dim: usize) -> KernelSpec {
    KernelSpec::newtonian(dim).expect("oracle dimension validated at construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::BallPart;
    use alloc::vec;

    #[test]
    fn unit_ball_closed_forms() {
        let set = CompactSet::unit_ball(3).unwrap();
        let k = KernelSpec::newtonian(3).unwrap();
        let o = equilibrium_oracle(&set, &k).unwrap();
        assert!(!o.is_approximate());
        assert_eq!(o.robin_constant(), 1.0);
        assert_eq!(o.green(&[2.0, 0.0, 0.0]), 0.5);
        assert_eq!(o.green(&[0.2, 0.1, 0.0]), 0.0);
        assert_eq!(o.potential(&[0.0, 0.0, 0.0]), 1.0);
        assert_eq!(o.potential(&[0.0, 4.0, 0.0]), 0.25);
    }

    #[test]
    fn radius_and_dimension_scaling() {
        let set = CompactSet::sphere(vec![0.0; 4], 2.0).unwrap();
        let o = equilibrium_oracle(&set, &KernelSpec::newtonian(4).unwrap()).unwrap();
        assert_eq!(o.robin_constant(), 0.25);
        assert_eq!(o.green(&[4.0, 0.0, 0.0, 0.0]), 0.25 - 1.0 / 16.0);
    }

    #[test]
    fn rejects_riesz_kernels() {
        let set = CompactSet::unit_ball(3).unwrap();
        let k = KernelSpec::new(1.5, 3).unwrap();
        assert_eq!(equilibrium_oracle(&set, &k), Err(Error::UnsupportedOracle));
    }

    #[test]
    fn green_bounds_and_positivity() {
        let k = KernelSpec::newtonian(3).unwrap();
        let mut rng = stream(4, "probe");
        for set in [CompactSet::unit_ball(3).unwrap(), CompactSet::unit_sphere(3).unwrap()] {
            let o = equilibrium_oracle(&set, &k).unwrap();
            let w = o.robin_constant();
            for _ in 0..1000 {
                let x: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
                let g = o.green(&x);
                let u = o.potential(&x);
                assert!((0.0..=w).contains(&g));
                assert!(u > 0.0 && u <= w);
                let outside = dist(&x, &[0.0; 3]) > 1.0;
                assert_eq!(g > 0.0, outside);
            }
        }
    }

    #[test]
    fn samples_lie_on_the_sphere() {
        let set = CompactSet::ball(vec![1.0, 0.0, 0.0], 2.0).unwrap();
        let o = equilibrium_oracle(&set, &KernelSpec::newtonian(3).unwrap()).unwrap();
        let s = o.sample(100, 1).unwrap();
        assert_eq!(s, o.sample(100, 1).unwrap());
        for p in s.iter() {
            assert!((dist(p, &[1.0, 0.0, 0.0]) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn approximate_oracle_for_two_balls() {
        let set = CompactSet::ball_union(vec![
            BallPart { center: vec![1.5, 0.0, 0.0], radius: 1.0 },
            BallPart { center: vec![-1.5, 0.0, 0.0], radius: 1.0 },
        ])
        .unwrap();
        let k = KernelSpec::newtonian(3).unwrap();
        let opts = ApproximationOptions { n: 120, max_iters: 200, seed: 3 };
        let o = EquilibriumOracle::Discrete(DiscreteEquilibrium::build(&set, &k, opts).unwrap());
        assert!(o.is_approximate());
        let w = o.robin_constant();
        // two unit balls have capacity between 1 and 2, so W lies in (1/2, 1)
        assert!(w > 0.5 && w < 1.0, "W = {w}");
        assert_eq!(o.green(&[1.5, 0.0, 0.0]), 0.0);
        // far field: g -> W - 1/|x|
        let far = o.green(&[0.0, 50.0, 0.0]);
        assert!((far - (w - 1.0 / 50.0)).abs() < 1e-3);
        let mut rng = stream(5, "probe");
        for _ in 0..200 {
            let x = unit_vector(3, &mut rng);
            let x: Vec<f64> = x.iter().map(|v| 3.5 * v).collect();
            if set.distance(&x) > 0.25 {
                assert!(o.green(&x) > 0.0);
            }
        }
    }
}
