use alloc::vec::Vec;
use core::slice::ChunksExact;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An ordered tuple of points `x_1, ..., x_n` in `R^d`, stored row-major.
///
/// Order is significant (Leja prefixes) and is preserved by every operation
/// and by the file formats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    dim: usize,
    coords: Vec<f64>,
}

impl PointConfig {
    /// Builds a configuration from flat row-major coordinates.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter("coordinate count is not a multiple of dim"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(PointConfig { dim, coords })
    }

    /// An empty configuration in `R^dim`.
    pub fn empty(dim: usize) -> Self {
        PointConfig {
            dim,
            coords: Vec::new(),
        }
    }

    /// Builds a configuration from individual points.
    pub fn from_points<P: AsRef<[f64]>>(dim: usize, points: impl IntoIterator<Item = P>) -> Result<Self> {
        let mut config = Self::empty(dim);
        for p in points {
            config.push(p.as_ref())?;
        }
        Ok(config)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// The `i`-th point.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    /// Flat row-major coordinates.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Appends a point.
    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        self.coords.extend_from_slice(p);
        Ok(())
    }

    /// The first `m` points.
    pub fn prefix(&self, m: usize) -> PointConfig {
        let m = m.min(self.len());
        PointConfig {
            dim: self.dim,
            coords: self.coords[..m * self.dim].to_vec(),
        }
    }

    /// Every coordinate multiplied by `c`.
    pub fn scaled(&self, c: f64) -> PointConfig {
        PointConfig {
            dim: self.dim,
            coords: self.coords.iter().map(|x| c * x).collect(),
        }
    }

    pub(crate) fn require_min_len(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            Err(Error::TooFewPoints {
                needed,
                found: self.len(),
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim,
            })
        } else {
            Ok(())
        }
    }
}
