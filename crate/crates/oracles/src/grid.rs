use std::f64::consts::PI;

use crate::energy::reference_energy;
use crate::{OracleError, Result};

/// Largest accepted number of polar angles.
pub const MAX_GRID_SIZE: usize = 64;
/// Largest accepted number of enumerated configurations.
pub const GRID_BUDGET: u128 = 2_000_000_000;

/// Outcome of [`grid_fekete`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFekete {
    /// Best grid configuration after polishing, on the unit sphere in `R^3`.
    pub points: Vec<[f64; 3]>,
    /// Energy of the best configuration on the grid itself.
    pub grid_energy: f64,
    /// Energy after the pattern-search polish.
    pub energy: f64,
    pub enumerated: u128,
}

fn cartesian(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

struct Grid {
    /// (polar index, azimuth index, point)
    nodes: Vec<(usize, usize, [f64; 3])>,
}

impl Grid {
    /// Polar angles `pi i/(g-1)`, azimuths `2 pi j/g`; each pole appears once.
    fn new(g: usize) -> Grid {
        let mut nodes = vec![(0, 0, [0.0, 0.0, 1.0])];
        for i in 1..g - 1 {
            for j in 0..g {
                let theta = PI * i as f64 / (g - 1) as f64;
                let phi = 2.0 * PI * j as f64 / g as f64;
                nodes.push((i, j, cartesian(theta, phi)));
            }
        }
        nodes.push((g - 1, 0, [0.0, 0.0, -1.0]));
        Grid { nodes }
    }
}

fn kernel(a: &[f64; 3], b: &[f64; 3], exponent: f64) -> f64 {
    let r2 = (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2);
    if exponent == -1.0 {
        1.0 / r2.sqrt()
    } else {
        r2.sqrt().powf(exponent)
    }
}

/// Exhaustive minimum of the discrete energy of `n <= 5` points over a
/// spherical grid with `grid_size` polar angles and `grid_size` azimuths,
/// followed by a pattern-search polish in angle space.
///
/// Symmetry pruning: the first point is the north pole, the second lies on
/// the zero meridian, the third has azimuth in `[0, pi]`, and the remaining
/// points have grid indices above the third's in increasing order.
pub fn grid_fekete(n: usize, grid_size: usize, alpha: f64) -> Result<GridFekete> {
    if !(2..=5).contains(&n) {
        return Err(OracleError::InvalidInput("grid search supports 2 <= n <= 5"));
    }
    if !(3..=MAX_GRID_SIZE).contains(&grid_size) {
        return Err(OracleError::Budget {
            requested: grid_size as u128,
            limit: MAX_GRID_SIZE as u128,
        });
    }
    if !(alpha > 0.0 && alpha < 3.0) {
        return Err(OracleError::InvalidInput("alpha must lie in (0, 3)"));
    }
    let grid = Grid::new(grid_size);
    let total = grid.nodes.len();
    let half: Vec<usize> = (0..total)
        .filter(|&k| 2 * grid.nodes[k].1 <= grid_size)
        .collect();
    let meridian: Vec<usize> = (1..total).filter(|&k| grid.nodes[k].1 == 0).collect();
    let mut requested = meridian.len() as u128;
    if n >= 3 {
        requested *= half.len() as u128;
    }
    for _ in 3..n {
        requested *= total as u128;
    }
    if requested > GRID_BUDGET {
        return Err(OracleError::Budget { requested, limit: GRID_BUDGET });
    }

    let exponent = alpha - 3.0;
    let p = |k: usize| &grid.nodes[k].2;
    let mut best = (f64::INFINITY, vec![0usize; n]);
    let mut enumerated = 0u128;
    for &b in &meridian {
        let e12 = kernel(p(0), p(b), exponent);
        if n == 2 {
            enumerated += 1;
            if e12 < best.0 {
                best = (e12, vec![0, b]);
            }
            continue;
        }
        for &c in &half {
            if c == 0 || c == b {
                continue;
            }
            let e3 = e12 + kernel(p(0), p(c), exponent) + kernel(p(b), p(c), exponent);
            if n == 3 {
                enumerated += 1;
                if e3 < best.0 {
                    best = (e3, vec![0, b, c]);
                }
                continue;
            }
            for d in c + 1..total {
                if d == b {
                    continue;
                }
                let e4 = e3
                    + kernel(p(0), p(d), exponent)
                    + kernel(p(b), p(d), exponent)
                    + kernel(p(c), p(d), exponent);
                if n == 4 {
                    enumerated += 1;
                    if e4 < best.0 {
                        best = (e4, vec![0, b, c, d]);
                    }
                    continue;
                }
                for e in d + 1..total {
                    if e == b {
                        continue;
                    }
                    enumerated += 1;
                    let e5 = e4
                        + kernel(p(0), p(e), exponent)
                        + kernel(p(b), p(e), exponent)
                        + kernel(p(c), p(e), exponent)
                        + kernel(p(d), p(e), exponent);
                    if e5 < best.0 {
                        best = (e5, vec![0, b, c, d, e]);
                    }
                }
            }
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let grid_energy = best.0 / pairs;
    let mut angles: Vec<(f64, f64)> = best
        .1
        .iter()
        .map(|&k| {
            let (i, j, _) = grid.nodes[k];
            (
                PI * i as f64 / (grid_size - 1) as f64,
                2.0 * PI * j as f64 / grid_size as f64,
            )
        })
        .collect();
    let energy = polish(&mut angles, alpha, PI / (grid_size - 1) as f64)?;
    Ok(GridFekete {
        points: angles.iter().map(|&(t, f)| cartesian(t, f)).collect(),
        grid_energy,
        energy,
        enumerated,
    })
}

fn energy_of(angles: &[(f64, f64)], alpha: f64) -> Result<f64> {
    let coords: Vec<f64> = angles.iter().flat_map(|&(t, f)| cartesian(t, f)).collect();
    reference_energy(&coords, 3, alpha)
}

/// Compass search on all angles: try `+-step` per coordinate, halve the step
/// after a sweep without improvement.
fn polish(angles: &mut [(f64, f64)], alpha: f64, start: f64) -> Result<f64> {
    let mut current = energy_of(angles, alpha)?;
    let mut step = start;
    while step > 1e-10 {
        let mut improved = false;
        for k in 0..angles.len() {
            for coord in 0..2 {
                for sign in [1.0, -1.0] {
                    let saved = angles[k];
                    if coord == 0 {
                        angles[k].0 += sign * step;
                    } else {
                        angles[k].1 += sign * step;
                    }
                    match energy_of(angles, alpha) {
                        Ok(e) if e < current => {
                            current = e;
                            improved = true;
                        }
                        _ => angles[k] = saved,
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodal_pair_is_on_the_grid() {
        let g = grid_fekete(2, 16, 2.0).unwrap();
        assert!((g.grid_energy - 0.5).abs() < 1e-15);
        assert!((g.energy - 0.5).abs() < 1e-15);
    }

    #[test]
    fn equilateral_triangle() {
        // 3 divides grid_size - 1, so 120 degrees is a grid angle
        let g = grid_fekete(3, 16, 2.0).unwrap();
        assert!((g.grid_energy - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn budget_and_input_checks() {
        assert!(matches!(grid_fekete(5, 64, 2.0), Err(OracleError::Budget { .. })));
        assert!(matches!(grid_fekete(2, 65, 2.0), Err(OracleError::Budget { .. })));
        assert!(grid_fekete(6, 8, 2.0).is_err());
        assert!(grid_fekete(1, 8, 2.0).is_err());
    }

    #[test]
    fn polish_never_increases_energy() {
        let g = grid_fekete(4, 12, 2.0).unwrap();
        assert!(g.energy <= g.grid_energy);
        assert!((g.energy - 0.375f64.sqrt()).abs() < 1e-6, "{}", g.energy);
    }
}
