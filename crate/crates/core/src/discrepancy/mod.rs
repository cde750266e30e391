//! Discrepancy between `tau(X_n)` and `mu_E` measured through test functions,
//! and potential error estimates for low-energy configurations.

mod test_function;

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::math::{dist, ln, powf, sqrt, unit_sphere_area};
use crate::measures::{closeness_m_e, discrete_energy, discrete_potential};
use crate::reduce::{map_indices, pairwise_sum};
use crate::rng::{derive_seed, indexed_stream, stream};
use crate::sets::{push_to_shell, unit_vector, MEMBERSHIP_TOL};
use crate::{CompactSet, EquilibriumOracle, Error, KernelSpec, PointConfig, Result, Shape};

pub use test_function::{phi_for_potential, ModulusModel, TestFunction};

/// Surface area `omega_d = 2 pi^(d/2) / Gamma(d/2)` of the unit sphere in `R^d`.
pub fn omega_d(dim: usize) -> f64 {
    unit_sphere_area(dim)
}

/// A modulus of continuity value; `estimated` marks a probe-based estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    pub value: f64,
    pub estimated: bool,
}

/// Inflation applied to probe-based modulus estimates.
pub const MODULUS_INFLATION: f64 = 1.2;

const SCALES_PER_OCTAVE: usize = 4;
const OCTAVES: usize = 40;

/// `omega(phi; r) = sup_{|x - y| <= r} |phi(x) - phi(y)|`.
///
/// Uses the closed-form model when `phi` has one. Otherwise each of `probes`
/// random base points in the support ball is paired with displacements along
/// a random direction at the fixed lengths `R 2^(-j/4)`; the largest
/// difference over lengths `<= r` is inflated by [`MODULUS_INFLATION`]. The
/// probe family does not depend on `r`, so the estimate is monotone in `r`.
pub fn modulus_of_continuity(phi: &TestFunction, r: f64, probes: usize, seed: u64) -> Result<Modulus> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("modulus radius must be positive"));
    }
    if let Some(model) = phi.modulus_model() {
        return Ok(Modulus { value: model.at(r), estimated: false });
    }
    let big_r = phi.support_radius();
    let lengths: Vec<f64> = (0..SCALES_PER_OCTAVE * OCTAVES)
        .map(|j| 2.0 * big_r * powf(2.0, -(j as f64) / SCALES_PER_OCTAVE as f64))
        .filter(|&l| l <= r)
        .collect();
    let worst = map_indices(probes, |i| {
        let mut rng = indexed_stream(seed, "modulus", i as u64);
        let x = uniform_in_ball(phi.support_center(), big_r, &mut rng);
        let u = unit_vector(phi.dim(), &mut rng);
        let fx = phi.evaluate(&x);
        lengths
            .iter()
            .map(|l| {
                let z: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + l * b).collect();
                (phi.evaluate(&z) - fx).abs()
            })
            .fold(0.0, f64::max)
    })
    .into_iter()
    .fold(0.0, f64::max);
    Ok(Modulus { value: MODULUS_INFLATION * worst, estimated: true })
}

fn uniform_in_ball<R: Rng + ?Sized>(center: &[f64], radius: f64, rng: &mut R) -> Vec<f64> {
    let u = unit_vector(center.len(), rng);
    let s = radius * powf(rng.random::<f64>(), 1.0 / center.len() as f64);
    center.iter().zip(&u).map(|(c, ui)| c + s * ui).collect()
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

fn mean_and_error(values: &[f64]) -> Estimate {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    if values.len() < 2 {
        return Estimate { value: mean, std_error: 0.0 };
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    Estimate { value: mean, std_error: sqrt(var / n) }
}

/// Step of the central differences in [`dirichlet_integral_mc`].
pub const FD_STEP: f64 = 1e-5;

/// `D[phi] = integral of |grad phi|^2`: the attached closed form when present,
/// otherwise [`dirichlet_integral_mc`].
pub fn dirichlet_integral(phi: &TestFunction, samples: usize, seed: u64) -> Result<f64> {
    match phi.dirichlet() {
        Some(d) => Ok(d),
        None => dirichlet_integral_mc(phi, samples, seed).map(|e| e.value),
    }
}

/// Monte Carlo `D[phi]` over the support ball, gradients by central
/// differences with step [`FD_STEP`].
pub fn dirichlet_integral_mc(phi: &TestFunction, samples: usize, seed: u64) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive"));
    }
    let dim = phi.dim();
    let big_r = phi.support_radius();
    if phi.is_zero() || big_r == 0.0 {
        return Ok(Estimate { value: 0.0, std_error: 0.0 });
    }
    let volume = unit_sphere_area(dim) * powf(big_r, dim as f64) / dim as f64;
    let values = map_indices(samples, |i| {
        let mut rng = indexed_stream(seed, "dirichlet", i as u64);
        let mut x = uniform_in_ball(phi.support_center(), big_r, &mut rng);
        let mut g2 = 0.0;
        for k in 0..dim {
            let xk = x[k];
            x[k] = xk + FD_STEP;
            let fp = phi.evaluate(&x);
            x[k] = xk - FD_STEP;
            let fm = phi.evaluate(&x);
            x[k] = xk;
            let g = (fp - fm) / (2.0 * FD_STEP);
            g2 += g * g;
        }
        volume * g2
    });
    Ok(mean_and_error(&values))
}

/// Sampling settings for [`theorem21_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundOptions {
    /// Equilibrium samples for `integral phi d mu_E` when no closed form applies.
    pub integration_samples: usize,
    /// Starting points for the Green function search on the shell.
    pub shell_candidates: usize,
    /// Probes for an estimated modulus and samples for a Monte Carlo `D[phi]`.
    pub probes: usize,
    pub seed: u64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            integration_samples: 100_000,
            shell_candidates: 2000,
            probes: 2000,
            seed: 0,
        }
    }
}

/// Every term of the discrepancy bound
///
/// `|(1/n) sum phi(x_k) - integral phi d mu_E| <= omega(phi; r) + sqrt(D[phi] / ((d-2) omega_d)) sqrt(I)`,
///
/// `I = 2 m_E + ((n-1)/n) I[tau_n] - W(E) + r^(2-d)/n + 2 max_{d_E <= 2r} g_E`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub lhs: f64,
    pub lhs_std_error: f64,
    pub omega_term: f64,
    pub omega_estimated: bool,
    pub energy_gap: f64,
    pub smoothing_term: f64,
    pub green_term: f64,
    pub m_term: f64,
    #[serde(rename = "I_value")]
    pub i_value: f64,
    pub dirichlet: f64,
    pub rhs: f64,
    pub r: f64,
    /// `I_value < 0`: the square root is undefined and the bound says nothing.
    pub vacuous: bool,
}

impl DiscrepancyReport {
    /// `lhs <= rhs + sigmas * lhs_std_error`; `None` when vacuous.
    pub fn holds_within(&self, sigmas: f64) -> Option<bool> {
        if self.vacuous {
            None
        } else {
            Some(self.lhs <= self.rhs + sigmas * self.lhs_std_error)
        }
    }
}

/// Evaluates both sides of the discrepancy bound for `x` at smoothing radius `r`.
///
/// `integral phi d mu_E` is exact for potential test functions against the
/// spherical oracle and for radial hats against the uniform measure on a
/// sphere in `R^3`; otherwise it is a Monte Carlo mean over equilibrium
/// samples and `lhs_std_error` is its standard error. The Green maximum over
/// `{d_E <= 2r}` is taken on the shell `{d_E = 2r}`: seeded starting points
/// followed by random-direction ascent.
pub fn theorem21_bound(
    set: &CompactSet,
    oracle: &EquilibriumOracle,
    x: &PointConfig,
    phi: &TestFunction,
    r: f64,
    spec: &KernelSpec,
    options: &BoundOptions,
) -> Result<DiscrepancyReport> {
    spec.require_newtonian()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter("smoothing radius must be positive"));
    }
    let dim = set.dim();
    for found in [spec.dim(), oracle.dim(), phi.dim(), x.dim()] {
        if found != dim {
            return Err(Error::DimensionMismatch { expected: dim, found });
        }
    }
    x.require_min_len(2)?;
    let n = x.len() as f64;
    let d = dim as f64;

    let values: Vec<f64> = x.iter().map(|p| phi.evaluate(p)).collect();
    let discrete_mean = pairwise_sum(&values) / n;
    let integral = integrate_against_equilibrium(oracle, phi, options)?;
    let lhs = (discrete_mean - integral.value).abs();

    let w = oracle.robin_constant();
    let energy = discrete_energy(x, spec)?;
    let energy_gap = (n - 1.0) / n * energy - w;
    let smoothing_term = spec.at_distance(r) / n;
    let green_term = 2.0 * max_green_on_shell(set, oracle, 2.0 * r, options.shell_candidates, options.seed);
    let m_term = 2.0 * closeness_m_e(x, set, oracle);
    let i_value = m_term + energy_gap + smoothing_term + green_term;

    let omega = modulus_of_continuity(phi, r, options.probes, derive_seed(options.seed, "modulus", 0))?;
    let dirichlet = dirichlet_integral(phi, options.probes, derive_seed(options.seed, "dirichlet", 0))?;
    let vacuous = i_value < 0.0;
    let rhs = omega.value + sqrt(dirichlet / ((d - 2.0) * omega_d(dim))) * sqrt(i_value.max(0.0));
    Ok(DiscrepancyReport {
        lhs,
        lhs_std_error: integral.std_error,
        omega_term: omega.value,
        omega_estimated: omega.estimated,
        energy_gap,
        smoothing_term,
        green_term,
        m_term,
        i_value,
        dirichlet,
        rhs,
        r,
        vacuous,
    })
}

/// `integral phi d mu_E`, exactly when a closed form applies.
pub fn integrate_against_equilibrium(
    oracle: &EquilibriumOracle,
    phi: &TestFunction,
    options: &BoundOptions,
) -> Result<Estimate> {
    if phi.is_zero() {
        return Ok(Estimate { value: 0.0, std_error: 0.0 });
    }
    if let EquilibriumOracle::Spherical { center, radius, dim } = oracle {
        if let Some(y) = phi.probe() {
            // phi equals |y - x|^(2-d) - R^(2-d) on the sphere
            let floor = powf(phi.support_radius(), 2.0 - *dim as f64);
            return Ok(Estimate { value: oracle.potential(y) - floor, std_error: 0.0 });
        }
        if let (Some(h), 3) = (phi.hat_height(), *dim) {
            let value = hat_on_sphere(center, *radius, phi.support_center(), phi.support_radius(), h);
            return Ok(Estimate { value, std_error: 0.0 });
        }
    }
    if options.integration_samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive"));
    }
    let samples = oracle.sample(options.integration_samples, derive_seed(options.seed, "integration", 0))?;
    let values = map_indices(samples.len(), |i| phi.evaluate(samples.point(i)));
    Ok(mean_and_error(&values))
}

/// Mean of `h max(1 - |x - c|/rho, 0)` over the uniform measure on the sphere
/// `|x - a| = radius` in `R^3`. The distance `s = |x - c|` has density
/// `s / (2 radius D)` on `[|D - radius|, D + radius]`, `D = |a - c|`.
fn hat_on_sphere(a: &[f64], radius: f64, c: &[f64], rho: f64, h: f64) -> f64 {
    let big_d = dist(a, c);
    if big_d == 0.0 {
        return h * (1.0 - radius / rho).max(0.0);
    }
    let lo = (big_d - radius).abs();
    let hi = (big_d + radius).min(rho);
    if lo >= hi {
        return 0.0;
    }
    let integral = (hi * hi - lo * lo) / 2.0 - (hi * hi * hi - lo * lo * lo) / (3.0 * rho);
    h * integral / (2.0 * radius * big_d)
}

/// Seeded points on the shell `{d_E = rho}`.
pub fn shell_points(set: &CompactSet, rho: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let (lo, hi) = set.bounding_box();
    let pad = rho + 0.5 * set.length_scale();
    let mut rng = stream(seed, "shell");
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count.max(1) {
        attempts += 1;
        let z: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| l - pad + (h - l + 2.0 * pad) * rng.random::<f64>())
            .collect();
        if let Some(p) = push_to_shell(set, &z, rho) {
            out.push(p);
        }
    }
    out
}

const ASCENT_STARTS: usize = 8;
const ASCENT_ITERS: usize = 60;

/// `max g_E` over `{d_E = rho}`: best of the seeded shell points, then a
/// random-direction ascent from the best few.
pub fn max_green_on_shell(
    set: &CompactSet,
    oracle: &EquilibriumOracle,
    rho: f64,
    candidates: usize,
    seed: u64,
) -> f64 {
    if let (EquilibriumOracle::Spherical { center, radius, .. }, Shape::Ball { .. } | Shape::Sphere { .. }) =
        (oracle, set.shape())
    {
        // g increases with |x - c|; the outer shell wins
        let mut p = center.clone();
        p[0] += radius + rho;
        return oracle.green(&p);
    }
    let pts = shell_points(set, rho, candidates.max(1), seed);
    let values = map_indices(pts.len(), |i| oracle.green(&pts[i]));
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let climbed = map_indices(order.len().min(ASCENT_STARTS), |k| {
        let i = order[k];
        let mut rng = indexed_stream(seed, "shell-ascent", k as u64);
        let mut best = pts[i].clone();
        let mut best_value = values[i];
        let mut step = 0.25 * set.length_scale();
        for _ in 0..ASCENT_ITERS {
            let u = unit_vector(set.dim(), &mut rng);
            let z: Vec<f64> = best.iter().zip(&u).map(|(b, ui)| b + step * ui).collect();
            let candidate = if set.distance(&z) > MEMBERSHIP_TOL {
                push_to_shell(set, &z, rho)
            } else {
                None
            };
            match candidate {
                Some(p) if oracle.green(&p) > best_value => {
                    best_value = oracle.green(&p);
                    best = p;
                }
                _ => step *= 0.7,
            }
        }
        best_value
    });
    climbed.into_iter().chain(values.iter().copied()).fold(0.0, f64::max)
}

/// `|U^{mu_E}(y) - U^{tau(X_n)}(y)|` and the shape
/// `d_E(y)^(1-d) n^(-p/s) + d_E(y)^(1-d/2) n^(-p/2)`, `p = s/(d+s-2)`, of its
/// bound for near-Fekete configurations. The constant in front is not known;
/// fit it with [`fit_constant`].
pub fn theorem22_error(
    set: &CompactSet,
    oracle: &EquilibriumOracle,
    x: &PointConfig,
    y: &[f64],
    spec: &KernelSpec,
) -> Result<(f64, f64)> {
    spec.require_newtonian()?;
    let holder = set.holder().ok_or(Error::MissingHolder)?;
    if y.len() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: y.len() });
    }
    let delta = set.distance(y);
    if delta <= MEMBERSHIP_TOL {
        return Err(Error::InsideSet);
    }
    x.require_min_len(1)?;
    if x.iter().any(|p| !set.contains(p)) {
        return Err(Error::NotInSet);
    }
    let measured = (oracle.potential(y) - discrete_potential(x, spec, y)?).abs();
    let shape = bound_shape(set.dim(), holder.exponent, delta, x.len());
    Ok((measured, shape))
}

/// `p = s / (d + s - 2)`.
pub fn holder_p(dim: usize, s: f64) -> f64 {
    s / (dim as f64 + s - 2.0)
}

/// `delta^(1-d) n^(-p/s) + delta^(1-d/2) n^(-p/2)`.
pub fn bound_shape(dim: usize, s: f64, delta: f64, n: usize) -> f64 {
    let d = dim as f64;
    let p = holder_p(dim, s);
    let n = n as f64;
    powf(delta, 1.0 - d) * powf(n, -p / s) + powf(delta, 1.0 - d / 2.0) * powf(n, -p / 2.0)
}

/// `max (U^{mu_E}(y) - U^{tau(X_n)}(y))` over `grid` seeded points of `E` and
/// as many on each of the shells `d_E = 0.05, 0.2, 0.5` (times the length
/// scale). Points that coincide with `X_n` are skipped.
pub fn sup_potential_deficit(
    oracle: &EquilibriumOracle,
    x: &PointConfig,
    set: &CompactSet,
    spec: &KernelSpec,
    grid: usize,
    seed: u64,
) -> Result<f64> {
    spec.require_newtonian()?;
    x.require_dim(set.dim())?;
    x.require_min_len(1)?;
    let mut probes: Vec<Vec<f64>> = set
        .sample_candidates(grid, derive_seed(seed, "deficit-grid", 0))?
        .iter()
        .map(|p| p.to_vec())
        .collect();
    for (k, frac) in [0.05, 0.2, 0.5].iter().enumerate() {
        probes.extend(shell_points(set, frac * set.length_scale(), grid, derive_seed(seed, "deficit-shell", k as u64)));
    }
    let deficits = map_indices(probes.len(), |i| {
        let y = &probes[i];
        match discrete_potential(x, spec, y) {
            Ok(u) => Ok(oracle.potential(y) - u),
            Err(Error::Singular) => Ok(f64::NEG_INFINITY),
            Err(e) => Err(e),
        }
    });
    let mut best = f64::NEG_INFINITY;
    for v in deficits {
        best = best.max(v?);
    }
    Ok(best)
}

/// Least-squares slope of `ln value` against `ln n`.
pub fn fit_decay_exponent(ns: &[usize], values: &[f64]) -> Result<f64> {
    if ns.len() != values.len() || ns.len() < 2 {
        return Err(Error::InvalidParameter("need at least two matching samples"));
    }
    if values.iter().any(|v| !(*v > 0.0)) || ns.contains(&0) {
        return Err(Error::InvalidParameter("values and sizes must be positive"));
    }
    let xs: Vec<f64> = ns.iter().map(|&n| ln(n as f64)).collect();
    let ys: Vec<f64> = values.iter().map(|&v| ln(v)).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("sizes must not all be equal"));
    }
    Ok(sxy / sxx)
}

/// Smallest `C` with `measured <= C * shape` for every pair.
pub fn fit_constant(measured: &[f64], shapes: &[f64]) -> f64 {
    measured
        .iter()
        .zip(shapes)
        .map(|(m, s)| m / s)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn ball() -> CompactSet {
        CompactSet::unit_ball(3).unwrap()
    }

    fn newton() -> KernelSpec {
        KernelSpec::newtonian(3).unwrap()
    }

    #[test]
    fn sphere_areas() {
        assert!((omega_d(3) - 4.0 * PI).abs() < 1e-12);
        assert!((omega_d(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn potential_test_function_values() {
        let phi = phi_for_potential(&ball(), &[2.0, 0.0, 0.0], &newton()).unwrap();
        assert_eq!(phi.support_radius(), 4.0);
        assert_eq!(phi.evaluate(&[2.0, 0.0, 0.0]), 0.75);
        assert_eq!(phi.evaluate(&[1.0, 0.0, 0.0]), 0.75);
        assert_eq!(phi.evaluate(&[5.0, 0.0, 0.0]), 0.0);
        assert_eq!(phi.evaluate(&[-2.5, 0.0, 0.0]), 0.0);
        assert_eq!(
            phi_for_potential(&ball(), &[0.5, 0.0, 0.0], &newton()).unwrap_err(),
            Error::InsideSet
        );
        let riesz = KernelSpec::new(1.0, 3).unwrap();
        assert!(phi_for_potential(&ball(), &[2.0, 0.0, 0.0], &riesz).is_err());
    }

    #[test]
    fn modulus_models() {
        let phi = phi_for_potential(&ball(), &[2.0, 0.0, 0.0], &newton()).unwrap();
        let m = modulus_of_continuity(&phi, 0.1, 10, 0).unwrap();
        assert!(!m.estimated);
        assert!((m.value - 2.0 * 3f64.sqrt() * 0.1).abs() < 1e-15);
        let zero = TestFunction::zero(3);
        assert_eq!(modulus_of_continuity(&zero, 0.3, 10, 0).unwrap().value, 0.0);
        assert!(modulus_of_continuity(&zero, 0.0, 10, 0).is_err());
    }

    #[test]
    fn estimated_modulus_is_monotone() {
        let ramp = TestFunction::custom(vec![0.0; 3], 1.0, |x| (1.0 - crate::math::norm(x)).clamp(0.0, 0.5)).unwrap();
        let one = modulus_of_continuity(&ramp, 0.05, 300, 4).unwrap();
        let two = modulus_of_continuity(&ramp, 0.1, 300, 4).unwrap();
        assert!(one.estimated && two.estimated);
        assert!(two.value >= one.value);
        assert!(one.value > 0.0);
    }

    #[test]
    fn hat_dirichlet_integral() {
        let hat = TestFunction::radial_hat(vec![0.0; 3], 1.0, 1.0).unwrap();
        assert!((dirichlet_integral(&hat, 1, 0).unwrap() - 4.0 * PI / 3.0).abs() < 1e-12);
        let mc = dirichlet_integral_mc(&hat, 20_000, 1).unwrap();
        assert!((mc.value - 4.0 * PI / 3.0).abs() < 4.0 * mc.std_error + 1e-9);
        assert_eq!(dirichlet_integral(&TestFunction::zero(3), 10, 0).unwrap(), 0.0);
    }

    #[test]
    fn hat_against_sphere_measure() {
        let sphere = CompactSet::unit_sphere(3).unwrap();
        let oracle = crate::sets::equilibrium_oracle(&sphere, &newton()).unwrap();
        let hat = TestFunction::radial_hat(vec![0.0, 0.3, 0.9], 0.8, 2.0).unwrap();
        let exact = integrate_against_equilibrium(&oracle, &hat, &BoundOptions::default()).unwrap();
        assert_eq!(exact.std_error, 0.0);
        let custom = TestFunction::custom(vec![0.0, 0.3, 0.9], 0.8, |x| {
            2.0 * (1.0 - dist(x, &[0.0, 0.3, 0.9]) / 0.8).max(0.0)
        })
        .unwrap();
        let mc = integrate_against_equilibrium(&oracle, &custom, &BoundOptions::default()).unwrap();
        assert!((mc.value - exact.value).abs() < 4.0 * mc.std_error, "{exact:?} {mc:?}");
    }

    #[test]
    fn antipodal_composite() {
        let sphere = CompactSet::unit_sphere(3).unwrap();
        let oracle = crate::sets::equilibrium_oracle(&sphere, &newton()).unwrap();
        let x = PointConfig::from_points(3, [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]).unwrap();
        let phi = TestFunction::zero(3);
        let rep = theorem21_bound(&sphere, &oracle, &x, &phi, 1.0, &newton(), &BoundOptions::default()).unwrap();
        assert!((rep.i_value - 13.0 / 12.0).abs() < 1e-12);
        assert_eq!(rep.m_term, 0.0);
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.holds_within(0.0), Some(true));
    }

    #[test]
    fn shell_search_matches_the_closed_form() {
        let sphere = CompactSet::unit_sphere(3).unwrap();
        let oracle = crate::sets::equilibrium_oracle(&sphere, &newton()).unwrap();
        let exact = max_green_on_shell(&sphere, &oracle, 0.2, 100, 0);
        let as_box = CompactSet::cuboid(vec![-1.0; 3], vec![1.0; 3]).unwrap();
        // exercise the search path on a set whose shell is not spherical
        let searched = max_green_on_shell(&as_box, &oracle, 0.2, 500, 0);
        assert!((exact - (1.0 - 1.0 / 1.2)).abs() < 1e-15);
        assert!(searched > exact);
        for p in shell_points(&as_box, 0.2, 50, 1) {
            assert!((as_box.distance(&p) - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn decay_helpers() {
        assert_eq!(holder_p(3, 1.0), 0.5);
        // 100^(-1/2) + 100^(-1/4)
        assert!((bound_shape(3, 1.0, 1.0, 100) - 0.416_227_766_016_838).abs() < 1e-12);
        let ns = [10, 100, 1000];
        let v: Vec<f64> = ns.iter().map(|&n| 3.0 * powf(n as f64, -0.5)).collect();
        assert!((fit_decay_exponent(&ns, &v).unwrap() + 0.5).abs() < 1e-12);
        assert!(fit_decay_exponent(&[10], &[1.0]).is_err());
        assert_eq!(fit_constant(&[1.0, 3.0], &[1.0, 2.0]), 1.5);
    }

    #[test]
    fn potential_error_contract() {
        let ball = ball().with_holder(None);
        let oracle = crate::sets::equilibrium_oracle(&ball, &newton()).unwrap();
        let x = PointConfig::from_points(3, [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(
            theorem22_error(&ball, &oracle, &x, &[2.0, 0.0, 0.0], &newton()),
            Err(Error::MissingHolder)
        );
        let ball = self::ball();
        assert_eq!(
            theorem22_error(&ball, &oracle, &x, &[0.2, 0.0, 0.0], &newton()),
            Err(Error::InsideSet)
        );
        let (measured, shape) = theorem22_error(&ball, &oracle, &x, &[0.0, 2.0, 0.0], &newton()).unwrap();
        assert!((measured - (1.0 / 5f64.sqrt() - 0.5).abs()).abs() < 1e-15);
        assert!((shape - powf(2.0, -0.5) - powf(2.0, -0.25)).abs() < 1e-15);
    }

    #[test]
    fn far_point_leaves_a_large_deficit() {
        let sphere = CompactSet::unit_sphere(3).unwrap();
        let oracle = crate::sets::equilibrium_oracle(&sphere, &newton()).unwrap();
        let x = PointConfig::from_points(3, [[50.0, 0.0, 0.0]]).unwrap();
        let d = sup_potential_deficit(&oracle, &x, &sphere, &newton(), 200, 0).unwrap();
        assert!(d > 0.9);
    }
}
