use crate::{OracleError, Result};

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// `2/(n(n-1)) sum_{j<k} |x_j - x_k|^(alpha-d)` by a compensated double loop.
/// `coords` holds `n` points of dimension `dim`, row-major.
pub fn reference_energy(coords: &[f64], dim: usize, alpha: f64) -> Result<f64> {
    if dim == 0 || !coords.len().is_multiple_of(dim) {
        return Err(OracleError::InvalidInput("coordinate length is not a multiple of dim"));
    }
    let n = coords.len() / dim;
    if n < 2 {
        return Err(OracleError::TooFewPoints { needed: 2, found: n });
    }
    let exponent = alpha - dim as f64;
    let mut total = NeumaierSum::default();
    for j in 0..n {
        for k in (j + 1)..n {
            let mut r2 = NeumaierSum::default();
            for i in 0..dim {
                let diff = coords[j * dim + i] - coords[k * dim + i];
                r2.add(diff * diff);
            }
            let r2 = r2.value();
            if r2 == 0.0 {
                return Err(OracleError::Coincident { first: j, second: k });
            }
            total.add(r2.sqrt().powf(exponent));
        }
    }
    Ok(2.0 * total.value() / (n as f64 * (n as f64 - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_distance_pair() {
        assert_eq!(reference_energy(&[0.0, 0.0, 0.0, 1.0, 0.0, 0.0], 3, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn regular_tetrahedron_with_unit_edges() {
        let t = [0.5, 0.0, 0.0, -0.5, 0.0, 0.0, 0.0, 0.5, 0.5f64.sqrt(), 0.0, -0.5, 0.5f64.sqrt()];
        let e = reference_energy(&t, 3, 2.0).unwrap();
        assert!((e - 1.0).abs() < 1e-15, "{e}");
    }

    #[test]
    fn coincident_points_are_rejected() {
        assert_eq!(
            reference_energy(&[1.0, 2.0, 3.0, 1.0, 2.0, 3.0], 3, 2.0),
            Err(OracleError::Coincident { first: 0, second: 1 })
        );
        assert!(reference_energy(&[1.0, 2.0, 3.0], 3, 2.0).is_err());
    }

    #[test]
    fn compensation_recovers_small_terms() {
        let mut s = NeumaierSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }
}
