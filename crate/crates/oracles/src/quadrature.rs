use std::f64::consts::PI;

use crate::{OracleError, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton iteration on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A quadrature value with a node-doubling error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    /// `y` lies within 5% of the radius from the sphere; the graded rule was used.
    pub near_singular: bool,
    pub nodes: usize,
}

/// Smallest accepted node count.
pub const MIN_NODES: usize = 1000;

/// Newtonian potential `integral |y - x|^(-1) d sigma(x)` of the normalized
/// surface measure on the sphere of radius `radius` about the origin in `R^3`.
///
/// Tensor rule: Gauss-Legendre in `z` times the trapezoid rule in the
/// azimuth, about `nodes` points in total. The error estimate is twice the
/// change from the rule with half as many nodes. Near the sphere the
/// integrand is singular; there the frame is rotated so `y` sits on the
/// pole and the polar integral is taken in `t` with `z = 1 - 2t^2`, which
/// removes the singularity.
pub fn sphere_potential_quadrature(radius: f64, y: &[f64; 3], nodes: usize) -> Result<Quadrature> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(OracleError::InvalidInput("radius must be positive"));
    }
    if nodes < MIN_NODES {
        return Err(OracleError::InvalidInput("at least 1000 nodes are required"));
    }
    let rho = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
    let near_singular = (rho - radius).abs() < 0.05 * radius;
    let rule = |count: usize| {
        if near_singular {
            graded(radius, rho, count)
        } else {
            tensor(radius, y, count)
        }
    };
    let fine = rule(nodes);
    let coarse = rule(nodes / 2);
    let error_estimate = (2.0 * (fine - coarse).abs()).max(1e-13 * fine.abs());
    Ok(Quadrature { value: fine, error_estimate, near_singular, nodes })
}

fn tensor(radius: f64, y: &[f64; 3], nodes: usize) -> f64 {
    let nz = ((nodes as f64 / 2.0).sqrt().ceil() as usize).max(2);
    let nphi = 2 * nz;
    let (zs, ws) = gauss_legendre(nz);
    let mut total = 0.0;
    for (z, w) in zs.iter().zip(&ws) {
        let s = (1.0 - z * z).max(0.0).sqrt();
        let mut ring = 0.0;
        for j in 0..nphi {
            let phi = 2.0 * PI * (j as f64 + 0.5) / nphi as f64;
            let x = [radius * s * phi.cos(), radius * s * phi.sin(), radius * z];
            let r2 = (y[0] - x[0]).powi(2) + (y[1] - x[1]).powi(2) + (y[2] - x[2]).powi(2);
            ring += 1.0 / r2.sqrt();
        }
        total += w * ring / nphi as f64;
    }
    0.5 * total
}

fn graded(radius: f64, rho: f64, nodes: usize) -> f64 {
    let nt = ((nodes as f64 / 2.0).sqrt().ceil() as usize).max(2);
    let (ts, ws) = gauss_legendre(nt);
    let mut total = 0.0;
    for (u, w) in ts.iter().zip(&ws) {
        // map [-1, 1] onto t in [0, 1]
        let t = 0.5 * (u + 1.0);
        let z = 1.0 - 2.0 * t * t;
        // t > 0 at every node, so r2 > 0
        let r2 = radius * radius + rho * rho - 2.0 * radius * rho * z;
        let jacobian = 4.0 * t * 0.5;
        total += w * jacobian / r2.sqrt();
    }
    0.5 * total
}
