//! Compact sets `E` in `R^d`: distance `d_E`, projection, sampling, and the
//! equilibrium oracles (`W(E)`, `U^{mu_E}`, `g_E`) for the Newtonian kernel.

mod equilibrium;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::math::{cos, dist, dist_sq, dot, norm, powf, sin, sqrt};
use crate::rng::{stream, StreamRng};
use crate::{Error, PointConfig, Result};

pub use equilibrium::{equilibrium_oracle, ApproximationOptions, EquilibriumOracle};

/// Points with `d_E(x) <= MEMBERSHIP_TOL` count as members of `E`.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// One ball of a [`Shape::BallUnion`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallPart {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Geometry of a shipped compact set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// Closed solid ball.
    Ball { center: Vec<f64>, radius: f64 },
    /// Sphere surface `{x : |x - c| = R}`.
    Sphere { center: Vec<f64>, radius: f64 },
    /// Axis-aligned box `[lower, upper]`.
    Cuboid { lower: Vec<f64>, upper: Vec<f64> },
    /// Finite union of closed balls.
    BallUnion(Vec<BallPart>),
}

/// Hoelder data `g_E(x) <= constant * d_E(x)^exponent` of the Green function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Holder {
    pub constant: f64,
    pub exponent: f64,
}

impl Holder {
    /// Requires `constant > 0` and `0 < exponent <= 1`.
    pub fn new(constant: f64, exponent: f64) -> Result<Self> {
        if !(constant > 0.0 && constant.is_finite()) {
            return Err(Error::InvalidParameter("Hoelder constant must be positive"));
        }
        if !(exponent > 0.0 && exponent <= 1.0) {
            return Err(Error::InvalidParameter("Hoelder exponent must lie in (0, 1]"));
        }
        Ok(Holder { constant, exponent })
    }
}

/// A compact set with optional Hoelder data. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactSet {
    dim: usize,
    shape: Shape,
    holder: Option<Holder>,
}

fn check_vector(v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidSet("empty coordinate vector"));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSet("radius must be positive and finite"))
    }
}

const DEFAULT_HOLDER: Holder = Holder {
    constant: 1.0,
    exponent: 1.0,
};

impl CompactSet {
    /// Closed ball. Carries the default Hoelder data `(1, 1)`.
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_vector(&center)?;
        check_radius(radius)?;
        Ok(CompactSet {
            dim: center.len(),
            shape: Shape::Ball { center, radius },
            holder: Some(DEFAULT_HOLDER),
        })
    }

    /// Sphere surface. Carries the default Hoelder data `(1, 1)`.
    pub fn sphere(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_vector(&center)?;
        check_radius(radius)?;
        Ok(CompactSet {
            dim: center.len(),
            shape: Shape::Sphere { center, radius },
            holder: Some(DEFAULT_HOLDER),
        })
    }

    /// Unit sphere centered at the origin of `R^dim`.
    pub fn unit_sphere(dim: usize) -> Result<Self> {
        Self::sphere(vec![0.0; dim], 1.0)
    }

    /// Unit ball centered at the origin of `R^dim`.
    pub fn unit_ball(dim: usize) -> Result<Self> {
        Self::ball(vec![0.0; dim], 1.0)
    }

    /// Axis-aligned box. Carries the default Hoelder data `(1, 1)`.
    pub fn cuboid(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_vector(&lower)?;
        check_vector(&upper)?;
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| l >= u) {
            return Err(Error::InvalidSet("box corners must satisfy lower < upper"));
        }
        Ok(CompactSet {
            dim: lower.len(),
            shape: Shape::Cuboid { lower, upper },
            holder: Some(DEFAULT_HOLDER),
        })
    }

    /// Union of closed balls. No Hoelder data by default.
    pub fn ball_union(parts: Vec<BallPart>) -> Result<Self> {
        let first = parts.first().ok_or(Error::InvalidSet("union needs at least one ball"))?;
        let dim = first.center.len();
        for part in &parts {
            check_vector(&part.center)?;
            check_radius(part.radius)?;
            if part.center.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: part.center.len(),
                });
            }
        }
        Ok(CompactSet {
            dim,
            shape: Shape::BallUnion(parts),
            holder: None,
        })
    }

    /// Replaces the Hoelder data.
    pub fn with_holder(mut self, holder: Option<Holder>) -> Self {
        self.holder = holder;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn holder(&self) -> Option<Holder> {
        self.holder
    }

    /// `d_E(x) = min_{t in E} |x - t|`, exact for every shipped shape.
    pub fn distance(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::Ball { center, radius } => (dist(x, center) - radius).max(0.0),
            Shape::Sphere { center, radius } => (dist(x, center) - radius).abs(),
            Shape::Cuboid { lower, upper } => {
                let mut acc = 0.0;
                for ((xi, lo), hi) in x.iter().zip(lower).zip(upper) {
                    let excess = (lo - xi).max(xi - hi).max(0.0);
                    acc += excess * excess;
                }
                sqrt(acc)
            }
            Shape::BallUnion(parts) => parts
                .iter()
                .map(|p| (dist(x, &p.center) - p.radius).max(0.0))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Membership up to [`MEMBERSHIP_TOL`].
    pub fn contains(&self, x: &[f64]) -> bool {
        self.distance(x) <= MEMBERSHIP_TOL
    }

    /// A nearest point of `E`. Points of `E` map to themselves. Ties resolve
    /// deterministically: the center of a sphere maps to `center + R e_1`,
    /// and equidistant balls of a union yield the lexicographically smallest
    /// candidate.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        match &self.shape {
            Shape::Ball { center, radius } => {
                let rho = dist(x, center);
                if rho <= *radius {
                    x.to_vec()
                } else {
                    radial_point(center, x, *radius, rho)
                }
            }
            Shape::Sphere { center, radius } => {
                let rho = dist(x, center);
                if rho == 0.0 {
                    let mut p = center.clone();
                    p[0] += radius;
                    p
                } else if rho == *radius {
                    x.to_vec()
                } else {
                    radial_point(center, x, *radius, rho)
                }
            }
            Shape::Cuboid { lower, upper } => x
                .iter()
                .zip(lower)
                .zip(upper)
                .map(|((xi, lo), hi)| xi.clamp(*lo, *hi))
                .collect(),
            Shape::BallUnion(parts) => {
                if parts.iter().any(|p| dist(x, &p.center) <= p.radius) {
                    return x.to_vec();
                }
                let gaps: Vec<f64> = parts.iter().map(|p| dist(x, &p.center) - p.radius).collect();
                let best = gaps.iter().copied().fold(f64::INFINITY, f64::min);
                parts
                    .iter()
                    .zip(&gaps)
                    .filter(|(_, g)| **g == best)
                    .map(|(p, _)| radial_point(&p.center, x, p.radius, dist(x, &p.center)))
                    .reduce(|a, b| if lex_less(&b, &a) { b } else { a })
                    .unwrap_or_else(|| x.to_vec())
            }
        }
    }

    /// Projects `v` onto the tangent cone of `E` at `x` (assumed in `E`): the
    /// component of `v` that moves `x` along or into the set to first order.
    pub fn tangent_direction(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        match &self.shape {
            Shape::Sphere { center, .. } => remove_normal(center, x, v, false),
            Shape::Ball { center, radius } => {
                if dist(x, center) >= radius * (1.0 - 1e-9) {
                    remove_normal(center, x, v, true)
                } else {
                    v.to_vec()
                }
            }
            Shape::Cuboid { lower, upper } => {
                let tol = 1e-12 * self.diameter();
                x.iter()
                    .zip(v)
                    .zip(lower.iter().zip(upper))
                    .map(|((xi, vi), (lo, hi))| {
                        if (*xi <= lo + tol && *vi < 0.0) || (*xi >= hi - tol && *vi > 0.0) {
                            0.0
                        } else {
                            *vi
                        }
                    })
                    .collect()
            }
            Shape::BallUnion(parts) => {
                let mut boundary = None;
                for p in parts {
                    let rho = dist(x, &p.center);
                    if rho < p.radius * (1.0 - 1e-9) {
                        return v.to_vec();
                    }
                    if rho <= p.radius * (1.0 + 1e-9) {
                        let inward = remove_normal(&p.center, x, v, true);
                        if inward.as_slice() == v {
                            return inward;
                        }
                        boundary.get_or_insert(inward);
                    }
                }
                boundary.unwrap_or_else(|| v.to_vec())
            }
        }
    }

    /// `max_{t, w in E} |t - w|`.
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } | Shape::Sphere { radius, .. } => 2.0 * radius,
            Shape::Cuboid { lower, upper } => dist(lower, upper),
            Shape::BallUnion(parts) => {
                let mut d = 0.0f64;
                for a in parts {
                    for b in parts {
                        d = d.max(dist(&a.center, &b.center) + a.radius + b.radius);
                    }
                }
                d
            }
        }
    }

    /// Half the diameter; the length unit used for default step sizes.
    pub fn length_scale(&self) -> f64 {
        0.5 * self.diameter()
    }

    /// Axis-aligned bounding box `(lower, upper)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.shape {
            Shape::Ball { center, radius } | Shape::Sphere { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Shape::Cuboid { lower, upper } => (lower.clone(), upper.clone()),
            Shape::BallUnion(parts) => {
                let mut lo = vec![f64::INFINITY; self.dim];
                let mut hi = vec![f64::NEG_INFINITY; self.dim];
                for p in parts {
                    for i in 0..self.dim {
                        lo[i] = lo[i].min(p.center[i] - p.radius);
                        hi[i] = hi[i].max(p.center[i] + p.radius);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// A reference center: the center of a ball or sphere, otherwise the
    /// midpoint of the bounding box.
    pub fn center(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Ball { center, .. } | Shape::Sphere { center, .. } => center.clone(),
            _ => {
                let (lo, hi) = self.bounding_box();
                lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect()
            }
        }
    }

    /// One draw from the set sampler: uniform on the sphere surface, uniform in
    /// volume for balls and boxes, and volume-weighted ball choice for unions.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match &self.shape {
            Shape::Sphere { center, radius } => {
                let u = unit_vector(self.dim, rng);
                center.iter().zip(&u).map(|(c, ui)| c + radius * ui).collect()
            }
            Shape::Ball { center, radius } => uniform_in_ball(center, *radius, rng),
            Shape::Cuboid { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
                .collect(),
            Shape::BallUnion(parts) => {
                let weights: Vec<f64> = parts.iter().map(|p| powf(p.radius, self.dim as f64)).collect();
                let total: f64 = weights.iter().sum();
                let mut pick = rng.random::<f64>() * total;
                let mut chosen = &parts[parts.len() - 1];
                for (p, w) in parts.iter().zip(&weights) {
                    if pick < *w {
                        chosen = p;
                        break;
                    }
                    pick -= w;
                }
                uniform_in_ball(&chosen.center, chosen.radius, rng)
            }
        }
    }

    /// Deterministic candidate points in `E` for grid searches.
    ///
    /// Spheres in `R^3` use a randomly rotated Fibonacci lattice (quasi-uniform,
    /// covering radius `O(count^-1/2)`); balls put half the candidates on the
    /// boundary sphere, where Newtonian minimizers live, and half in the volume.
    /// Everything else draws from [`CompactSet::sample_point`].
    pub fn sample_candidates(&self, count: usize, seed: u64) -> Result<PointConfig> {
        if count == 0 {
            return Err(Error::InvalidParameter("candidate count must be positive"));
        }
        let mut rng = stream(seed, "candidates");
        let mut out = PointConfig::empty(self.dim);
        match &self.shape {
            Shape::Sphere { center, radius } => {
                for p in sphere_lattice(center, *radius, count, &mut rng) {
                    out.push(&p)?;
                }
            }
            Shape::Ball { center, radius } => {
                let on_boundary = count.div_ceil(2);
                for p in sphere_lattice(center, *radius, on_boundary, &mut rng) {
                    out.push(&p)?;
                }
                for _ in on_boundary..count {
                    out.push(&uniform_in_ball(center, *radius, &mut rng))?;
                }
            }
            _ => {
                for _ in 0..count {
                    out.push(&self.sample_point(&mut rng))?;
                }
            }
        }
        Ok(out)
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

fn radial_point(center: &[f64], x: &[f64], radius: f64, rho: f64) -> Vec<f64> {
    center
        .iter()
        .zip(x)
        .map(|(c, xi)| c + radius * (xi - c) / rho)
        .collect()
}

/// Removes the normal component of `v` at `x` for the sphere about `center`.
/// With `outward_only`, only an outward-pointing normal component is removed.
fn remove_normal(center: &[f64], x: &[f64], v: &[f64], outward_only: bool) -> Vec<f64> {
    let rho = dist(x, center);
    if rho == 0.0 {
        return v.to_vec();
    }
    let n: Vec<f64> = x.iter().zip(center).map(|(xi, c)| (xi - c) / rho).collect();
    let vn = dot(v, &n);
    if outward_only && vn <= 0.0 {
        return v.to_vec();
    }
    v.iter().zip(&n).map(|(vi, ni)| vi - vn * ni).collect()
}

pub(crate) fn unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let r = norm(&v);
        if r > 1e-12 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

fn uniform_in_ball<R: Rng + ?Sized>(center: &[f64], radius: f64, rng: &mut R) -> Vec<f64> {
    let dim = center.len();
    let u = unit_vector(dim, rng);
    let s = radius * powf(rng.random::<f64>(), 1.0 / dim as f64);
    center.iter().zip(&u).map(|(c, ui)| c + s * ui).collect()
}

/// Uniformly random rotation of `R^3` as a row-major matrix.
fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> [[f64; 3]; 3] {
    let q = unit_vector(4, rng);
    let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn sphere_lattice(center: &[f64], radius: f64, count: usize, rng: &mut StreamRng) -> Vec<Vec<f64>> {
    let dim = center.len();
    if dim != 3 {
        return (0..count)
            .map(|_| {
                let u = unit_vector(dim, rng);
                center.iter().zip(&u).map(|(c, ui)| c + radius * ui).collect()
            })
            .collect();
    }
    let rot = random_rotation(rng);
    let golden = PI * (3.0 - sqrt(5.0));
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            let rho = sqrt((1.0 - z * z).max(0.0));
            let phi = golden * i as f64;
            let p = [rho * cos(phi), rho * sin(phi), z];
            let mut q = [0.0; 3];
            for (qi, row) in q.iter_mut().zip(&rot) {
                *qi = dot(row, &p);
            }
            // renormalize so the point sits on the sphere to rounding
            let len = norm(&q);
            (0..3).map(|k| center[k] + radius * q[k] / len).collect()
        })
        .collect()
}

/// Maps a point outside `E` to `P(x) + rho * (x - P(x)) / |x - P(x)|`, a point
/// at distance at most `rho` from `E` (exactly `rho` for convex sets and
/// spheres). Returns `None` for points of `E`.
pub(crate) fn push_to_shell(set: &CompactSet, x: &[f64], rho: f64) -> Option<Vec<f64>> {
    let p = set.project(x);
    let d = sqrt(dist_sq(x, &p));
    if d <= MEMBERSHIP_TOL {
        return None;
    }
    Some(p.iter().zip(x).map(|(pi, xi)| pi + rho * (xi - pi) / d).collect())
}
