use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::{dist_sq, norm, sqrt};
use crate::reduce::map_indices;
use crate::rng::derive_seed;
use crate::{CompactSet, Error, KernelSpec, PointConfig, RadialKernel, Result};

/// A Leja prefix `xi_0, ..., xi_m` together with the candidate points for the
/// next step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LejaState {
    pub prefix: PointConfig,
    pub candidates: PointConfig,
}

const REFINE_ITERS: usize = 200;

/// `sum_k |x - xi_k|^(2-d)`, or the index of a prefix point equal to `x`.
fn prefix_sum(prefix: &PointConfig, kernel: &KernelSpec, x: &[f64]) -> core::result::Result<f64, usize> {
    let mut acc = 0.0;
    for (k, p) in prefix.iter().enumerate() {
        let r2 = dist_sq(x, p);
        if r2 == 0.0 {
            return Err(k);
        }
        acc += kernel.at_sq_distance(r2);
    }
    Ok(acc)
}

fn prefix_gradient(prefix: &PointConfig, kernel: &KernelSpec, x: &[f64]) -> Vec<f64> {
    let mut g = alloc::vec![0.0; x.len()];
    for p in prefix.iter() {
        let f = kernel.gradient_factor(dist_sq(x, p));
        for ((gi, xi), pi) in g.iter_mut().zip(x).zip(p) {
            *gi += f * (xi - pi);
        }
    }
    g
}

/// Next Leja point: the candidate minimizing `sum_k |x - xi_k|^(2-d)` (lowest
/// index on ties), polished by projected descent of the same sum over `E`.
///
/// A candidate equal to a prefix point raises
/// [`Error::CoincidentPoints`]`{ first: prefix index, second: candidate index }`.
pub fn leja_next(set: &CompactSet, state: &LejaState, kernel: &KernelSpec) -> Result<Vec<f64>> {
    kernel.require_newtonian()?;
    state.prefix.require_dim(set.dim())?;
    state.candidates.require_dim(set.dim())?;
    state.prefix.require_min_len(1)?;
    if state.candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let values = map_indices(state.candidates.len(), |i| {
        prefix_sum(&state.prefix, kernel, state.candidates.point(i))
            .map_err(|k| Error::CoincidentPoints { first: k, second: i })
    });
    let mut best = 0;
    let mut best_value = f64::INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if v < best_value {
            best = i;
            best_value = v;
        }
    }
    let mut x = state.candidates.point(best).to_vec();
    refine(set, &state.prefix, kernel, &mut x, best_value);
    Ok(x)
}

fn refine(set: &CompactSet, prefix: &PointConfig, kernel: &KernelSpec, x: &mut Vec<f64>, mut value: f64) {
    let nearest = prefix.iter().map(|p| dist_sq(x, p)).fold(f64::INFINITY, f64::min);
    let mut step = 0.5 * sqrt(nearest);
    let min_step = 1e-13 * set.length_scale();
    for _ in 0..REFINE_ITERS {
        let force: Vec<f64> = prefix_gradient(prefix, kernel, x).iter().map(|g| -g).collect();
        let d = set.tangent_direction(x, &force);
        let len = norm(&d);
        if len == 0.0 {
            return;
        }
        loop {
            let moved: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di / len).collect();
            let trial = set.project(&moved);
            match prefix_sum(prefix, kernel, &trial) {
                Ok(v) if v < value => {
                    *x = trial;
                    value = v;
                    step *= 1.5;
                    break;
                }
                _ => {
                    step *= 0.5;
                    if step < min_step {
                        return;
                    }
                }
            }
        }
    }
}

/// Leja sequence `xi_0, ..., xi_{n-1}` from `xi0`.
///
/// Step `k` searches a fresh candidate set seeded by `(seed, k)`, so a shorter
/// run is always a prefix of a longer one with the same seed.
pub fn leja_sequence(
    set: &CompactSet,
    kernel: &KernelSpec,
    n: usize,
    xi0: &[f64],
    candidate_count: usize,
    seed: u64,
) -> Result<PointConfig> {
    kernel.require_newtonian()?;
    if n == 0 {
        return Err(Error::InvalidParameter("sequence length must be positive"));
    }
    if xi0.len() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: xi0.len() });
    }
    if !set.contains(xi0) {
        return Err(Error::NotInSet);
    }
    let mut prefix = PointConfig::empty(set.dim());
    prefix.push(xi0)?;
    for step in 1..n {
        let candidates = set.sample_candidates(candidate_count, derive_seed(seed, "leja-candidates", step as u64))?;
        let state = LejaState { prefix, candidates };
        let next = leja_next(set, &state, kernel)?;
        prefix = state.prefix;
        prefix.push(&next)?;
    }
    Ok(prefix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::dist;
    use crate::measures::discrete_energy;

    fn sphere() -> CompactSet {
        CompactSet::unit_sphere(3).unwrap()
    }

    fn newton() -> KernelSpec {
        KernelSpec::newtonian(3).unwrap()
    }

    #[test]
    fn antipode_of_the_north_pole() {
        let state = LejaState {
            prefix: PointConfig::from_points(3, [[0.0, 0.0, 1.0]]).unwrap(),
            candidates: sphere().sample_candidates(500, 1).unwrap(),
        };
        let next = leja_next(&sphere(), &state, &newton()).unwrap();
        assert!(dist(&next, &[0.0, 0.0, -1.0]) < 1e-6, "{next:?}");
    }

    #[test]
    fn two_poles_give_an_equator_point() {
        let state = LejaState {
            prefix: PointConfig::from_points(3, [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]).unwrap(),
            candidates: sphere().sample_candidates(10_000, 2).unwrap(),
        };
        let next = leja_next(&sphere(), &state, &newton()).unwrap();
        assert!(next[0].abs() < 1e-4);
        assert!((norm(&next) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        let prefix = PointConfig::from_points(3, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let state = LejaState { prefix: prefix.clone(), candidates: prefix.clone() };
        assert!(matches!(
            leja_next(&sphere(), &state, &newton()),
            Err(Error::CoincidentPoints { .. })
        ));
        let state = LejaState { prefix, candidates: PointConfig::empty(3) };
        assert_eq!(leja_next(&sphere(), &state, &newton()), Err(Error::EmptyCandidates));
        let riesz = KernelSpec::new(1.0, 3).unwrap();
        assert!(matches!(
            leja_sequence(&sphere(), &riesz, 3, &[0.0, 0.0, 1.0], 10, 0),
            Err(Error::NotNewtonian { .. })
        ));
        assert_eq!(
            leja_sequence(&sphere(), &newton(), 3, &[0.0, 0.0, 0.5], 10, 0),
            Err(Error::NotInSet)
        );
    }

    #[test]
    fn short_sequences() {
        let one = leja_sequence(&sphere(), &newton(), 1, &[0.0, 0.0, 1.0], 100, 0).unwrap();
        assert_eq!(one.len(), 1);
        let two = leja_sequence(&sphere(), &newton(), 2, &[0.0, 0.0, 1.0], 500, 0).unwrap();
        assert!(dist(two.point(1), &[0.0, 0.0, -1.0]) < 1e-6);
    }

    #[test]
    fn prefixes_are_leja_runs_and_stay_below_robin() {
        let long = leja_sequence(&sphere(), &newton(), 60, &[0.0, 0.0, 1.0], 800, 3).unwrap();
        let short = leja_sequence(&sphere(), &newton(), 25, &[0.0, 0.0, 1.0], 800, 3).unwrap();
        assert_eq!(long.prefix(25), short);
        for m in 2..=60 {
            let e = discrete_energy(&long.prefix(m), &newton()).unwrap();
            assert!(e <= 1.0 + 1e-6, "prefix {m}: {e}");
        }
        assert!(long.iter().all(|p| sphere().contains(p)));
    }

    #[test]
    fn ball_sequences_live_on_the_boundary() {
        let ball = CompactSet::unit_ball(3).unwrap();
        let seq = leja_sequence(&ball, &newton(), 20, &[0.0, 0.0, 0.0], 400, 1).unwrap();
        for p in seq.iter().skip(1) {
            assert!((norm(p) - 1.0).abs() < 1e-9);
        }
    }
}
