use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::random_config;
use crate::math::{dist_sq, norm, sqrt};
use crate::measures::{discrete_energy, pair_sum_and_gradient};
use crate::reduce::map_indices;
use crate::rng::{derive_seed, indexed_stream};
use crate::sets::unit_vector;
use crate::{CompactSet, Error, PointConfig, RadialKernel, Result};

/// Settings for [`fekete_search`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeketeSearchParams {
    /// Configuration size, at least 2.
    pub n: usize,
    /// Independent random initializations; the best result is kept.
    pub restarts: usize,
    /// Iteration cap per restart.
    pub max_iters: usize,
    /// Initial step length. `None` uses `0.1 * length_scale / sqrt(n)`.
    pub step0: Option<f64>,
    /// Stop once the relative energy decrease stays below `tol` for
    /// [`STALL_WINDOW`] consecutive accepted steps.
    pub tol: f64,
    pub seed: u64,
}

/// Consecutive low-progress steps that count as convergence.
pub const STALL_WINDOW: usize = 10;

impl FeketeSearchParams {
    pub fn new(n: usize, seed: u64) -> Self {
        FeketeSearchParams {
            n,
            restarts: 4,
            max_iters: 5000,
            step0: None,
            tol: 1e-12,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewPoints { needed: 2, found: self.n });
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be at least 1"));
        }
        if let Some(s) = self.step0 {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidParameter("step0 must be positive"));
            }
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter("tol must be positive"));
        }
        Ok(())
    }
}

/// Result of a Fekete search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeketeOutcome {
    pub config: PointConfig,
    /// Discrete energy of `config`.
    pub energy: f64,
    /// Iterations used by the winning restart.
    pub iterations: usize,
    /// False when the winning restart hit `max_iters` first.
    pub converged: bool,
    pub best_restart: usize,
    /// Discrete energy of every restart's initial configuration.
    pub initial_energies: Vec<f64>,
}

struct RestartResult {
    coords: Vec<f64>,
    pair_sum: f64,
    initial_pair_sum: f64,
    iterations: usize,
    converged: bool,
}

/// Approximate Fekete points: projected gradient descent on the `n`-fold
/// product of `E`.
///
/// Each step moves every point along the tangent-cone projection of its
/// repulsion force, scaled so the largest move equals the current step
/// length, then projects back onto `E`. A step is accepted only if the energy
/// decreases; otherwise the step is halved. Accepted steps grow the step
/// length by 1.5. Restarts run independently and the lowest energy wins,
/// ties going to the lowest restart index. Hitting `max_iters` is not an
/// error; the outcome's `converged` flag is cleared instead.
pub fn fekete_search<K: RadialKernel + Sync>(
    set: &CompactSet,
    kernel: &K,
    params: &FeketeSearchParams,
) -> Result<FeketeOutcome> {
    params.validate()?;
    if kernel.dim() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: kernel.dim() });
    }
    let scale = set.length_scale();
    let step0 = params
        .step0
        .unwrap_or(0.1 * scale / sqrt(params.n as f64));
    let runs = map_indices(params.restarts, |restart| {
        descend(set, kernel, params, restart as u64, step0, scale)
    });
    let runs: Vec<RestartResult> = runs.into_iter().collect::<Result<_>>()?;
    let norm_factor = 2.0 / (params.n as f64 * (params.n as f64 - 1.0));
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.pair_sum < runs[best].pair_sum {
            best = i;
        }
    }
    let initial_energies = runs.iter().map(|r| norm_factor * r.initial_pair_sum).collect();
    let winner = &runs[best];
    let config = PointConfig::new(set.dim(), winner.coords.clone())?;
    let energy = discrete_energy(&config, kernel)?;
    Ok(FeketeOutcome {
        config,
        energy,
        iterations: winner.iterations,
        converged: winner.converged,
        best_restart: best,
        initial_energies,
    })
}

fn has_coincidence(coords: &[f64], dim: usize) -> Option<usize> {
    let n = coords.len() / dim;
    for j in 0..n {
        for k in j + 1..n {
            if dist_sq(&coords[j * dim..(j + 1) * dim], &coords[k * dim..(k + 1) * dim]) == 0.0 {
                return Some(k);
            }
        }
    }
    None
}

fn descend<K: RadialKernel + Sync>(
    set: &CompactSet,
    kernel: &K,
    params: &FeketeSearchParams,
    restart: u64,
    step0: f64,
    scale: f64,
) -> Result<RestartResult> {
    let dim = set.dim();
    let init = random_config(set, params.n, derive_seed(params.seed, "fekete-init", restart))?;
    let mut coords = init.coords().to_vec();
    let mut jitter_rng = indexed_stream(params.seed, "fekete-jitter", restart);
    while let Some(k) = has_coincidence(&coords, dim) {
        let u = unit_vector(dim, &mut jitter_rng);
        let moved: Vec<f64> = coords[k * dim..(k + 1) * dim]
            .iter()
            .zip(&u)
            .map(|(x, d)| x + 1e-6 * scale * d)
            .collect();
        coords[k * dim..(k + 1) * dim].copy_from_slice(&set.project(&moved));
    }

    let (mut energy, mut gradient) = pair_sum_and_gradient(&coords, dim, kernel)?;
    let initial_pair_sum = energy;
    let min_step = 1e-13 * scale;
    let mut step = step0;
    let mut stall = 0;
    let mut converged = false;
    let mut iterations = 0;
    let mut direction = alloc::vec![0.0; coords.len()];
    let mut trial = alloc::vec![0.0; coords.len()];

    'outer: while iterations < params.max_iters {
        iterations += 1;
        let mut longest = 0.0f64;
        for j in 0..params.n {
            let range = j * dim..(j + 1) * dim;
            let force: Vec<f64> = gradient[range.clone()].iter().map(|g| -g).collect();
            let d = set.tangent_direction(&coords[range.clone()], &force);
            longest = longest.max(norm(&d));
            direction[range].copy_from_slice(&d);
        }
        if longest == 0.0 {
            converged = true;
            break;
        }
        loop {
            let factor = step / longest;
            for j in 0..params.n {
                let range = j * dim..(j + 1) * dim;
                let moved: Vec<f64> = coords[range.clone()]
                    .iter()
                    .zip(&direction[range.clone()])
                    .map(|(x, d)| x + factor * d)
                    .collect();
                trial[range].copy_from_slice(&set.project(&moved));
            }
            match pair_sum_and_gradient(&trial, dim, kernel) {
                Ok((e, g)) if e < energy => {
                    let relative = (energy - e) / energy.abs();
                    core::mem::swap(&mut coords, &mut trial);
                    energy = e;
                    gradient = g;
                    step = (1.5 * step).min(scale);
                    if relative < params.tol {
                        stall += 1;
                        if stall >= STALL_WINDOW {
                            converged = true;
                            break 'outer;
                        }
                    } else {
                        stall = 0;
                    }
                    break;
                }
                // no decrease, or a collision: shorten the step
                Ok(_) | Err(Error::CoincidentPoints { .. }) => {
                    step *= 0.5;
                    if step < min_step {
                        converged = true;
                        break 'outer;
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(RestartResult {
        coords,
        pair_sum: energy,
        initial_pair_sum,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::dist;
    use crate::KernelSpec;

    fn sphere() -> CompactSet {
        CompactSet::unit_sphere(3).unwrap()
    }

    fn newton() -> KernelSpec {
        KernelSpec::newtonian(3).unwrap()
    }

    #[test]
    fn two_points_become_antipodal() {
        let out = fekete_search(&sphere(), &newton(), &FeketeSearchParams::new(2, 1)).unwrap();
        assert!((out.energy - 0.5).abs() < 1e-6, "{}", out.energy);
        assert!((dist(out.config.point(0), out.config.point(1)) - 2.0).abs() < 1e-3);
    }

    #[test]
    fn four_points_become_a_tetrahedron() {
        let out = fekete_search(&sphere(), &newton(), &FeketeSearchParams::new(4, 2)).unwrap();
        assert!((out.energy - 0.375f64.sqrt()).abs() < 1e-4, "{}", out.energy);
    }

    #[test]
    fn contract() {
        let params = FeketeSearchParams::new(30, 5);
        let out = fekete_search(&sphere(), &newton(), &params).unwrap();
        assert!(out.config.iter().all(|p| sphere().distance(p) <= 1e-9));
        assert!(out.initial_energies.iter().all(|&e| out.energy <= e));
        assert_eq!(out.energy, discrete_energy(&out.config, &newton()).unwrap());
        assert!(out.energy < 1.0);
        assert_eq!(out, fekete_search(&sphere(), &newton(), &params).unwrap());
    }

    #[test]
    fn ball_points_move_to_the_boundary() {
        let ball = CompactSet::unit_ball(3).unwrap();
        let out = fekete_search(&ball, &newton(), &FeketeSearchParams::new(12, 3)).unwrap();
        for p in out.config.iter() {
            assert!((norm(p) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn iteration_cap_sets_the_flag() {
        let mut params = FeketeSearchParams::new(20, 5);
        params.max_iters = 3;
        params.restarts = 1;
        let out = fekete_search(&sphere(), &newton(), &params).unwrap();
        assert!(!out.converged);
        assert_eq!(out.iterations, 3);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = FeketeSearchParams::new(1, 0);
        assert!(fekete_search(&sphere(), &newton(), &p).is_err());
        p.n = 5;
        p.restarts = 0;
        assert!(fekete_search(&sphere(), &newton(), &p).is_err());
        p.restarts = 1;
        p.step0 = Some(-1.0);
        assert!(fekete_search(&sphere(), &newton(), &p).is_err());
    }

    #[test]
    fn riesz_kernels_work_too() {
        let k = KernelSpec::new(1.0, 3).unwrap();
        let out = fekete_search(&sphere(), &k, &FeketeSearchParams::new(2, 1)).unwrap();
        // |x|^-2 at the diameter
        assert!((out.energy - 0.25).abs() < 1e-6);
    }
}
