//! The Riesz kernel family `k_alpha(x) = |x|^(alpha - d)` on `R^d`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::{powf, sqrt};
use crate::{Error, Result};

/// A radial interaction kernel evaluated through squared distances.
///
/// Energies, potentials and the optimizers are written against this trait so a
/// different radial profile can be plugged in. [`KernelSpec`] is the only
/// implementation shipped.
pub trait RadialKernel {
    /// Ambient dimension.
    fn dim(&self) -> usize;

    /// Kernel value at squared distance `r2 > 0`.
    fn at_sq_distance(&self, r2: f64) -> f64;

    /// `k'(r) / r` at squared distance `r2 > 0`, so that the gradient of
    /// `x -> k(|x|)` is `gradient_factor(|x|^2) * x`.
    fn gradient_factor(&self, r2: f64) -> f64;
}

/// Riesz parameters `(alpha, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    alpha: f64,
    dim: usize,
}

impl KernelSpec {
    /// Validates `0 < alpha < dim` and `dim >= 3`.
    pub fn new(alpha: f64, dim: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha < dim as f64 && dim >= 3) {
            return Err(Error::InvalidKernel { alpha, dim });
        }
        Ok(KernelSpec { alpha, dim })
    }

    /// The Newtonian kernel `|x|^(2 - d)`.
    pub fn newtonian(dim: usize) -> Result<Self> {
        Self::new(2.0, dim)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The exponent `alpha - d`.
    pub fn exponent(&self) -> f64 {
        self.alpha - self.dim as f64
    }

    pub fn is_newtonian(&self) -> bool {
        self.alpha == 2.0
    }

    /// Fails with [`Error::NotNewtonian`] unless `alpha = 2`.
    pub fn require_newtonian(&self) -> Result<()> {
        if self.is_newtonian() {
            Ok(())
        } else {
            Err(Error::NotNewtonian { alpha: self.alpha })
        }
    }

    /// `|x|^(alpha - d)`. Zero displacement is a hard error.
    pub fn value(&self, displacement: &[f64]) -> Result<f64> {
        let r2 = self.checked_sq_norm(displacement)?;
        Ok(self.at_sq_distance(r2))
    }

    /// `(alpha - d) |x|^(alpha - d - 2) x`.
    pub fn gradient(&self, displacement: &[f64]) -> Result<Vec<f64>> {
        let r2 = self.checked_sq_norm(displacement)?;
        let factor = self.gradient_factor(r2);
        Ok(displacement.iter().map(|x| factor * x).collect())
    }

    /// Kernel value at distance `r > 0`.
    pub fn at_distance(&self, r: f64) -> f64 {
        self.at_sq_distance(r * r)
    }

    fn checked_sq_norm(&self, displacement: &[f64]) -> Result<f64> {
        if displacement.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: displacement.len(),
            });
        }
        let r2: f64 = displacement.iter().map(|x| x * x).sum();
        if r2 == 0.0 {
            return Err(Error::Singular);
        }
        Ok(r2)
    }
}

impl RadialKernel for KernelSpec {
    fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn at_sq_distance(&self, r2: f64) -> f64 {
        let e = self.exponent();
        if e == -1.0 {
            1.0 / sqrt(r2)
        } else if e == -2.0 {
            1.0 / r2
        } else if e == -3.0 {
            1.0 / (r2 * sqrt(r2))
        } else {
            powf(r2, 0.5 * e)
        }
    }

    #[inline]
    fn gradient_factor(&self, r2: f64) -> f64 {
        self.exponent() * self.at_sq_distance(r2) / r2
    }
}

/// True iff the kernel is Newtonian (`alpha = 2`).
pub fn newtonian_flag(spec: &KernelSpec) -> bool {
    spec.is_newtonian()
}
