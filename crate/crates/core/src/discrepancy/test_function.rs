use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::math::{dist, powf, sqrt, unit_sphere_area};
use crate::{CompactSet, Error, KernelSpec, Result};

/// Closed-form modulus of continuity `omega(phi; r) = min(lipschitz * r, cap)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusModel {
    pub lipschitz: f64,
    /// Bound on the total oscillation of `phi`, if known.
    pub cap: Option<f64>,
}

impl ModulusModel {
    pub fn at(&self, r: f64) -> f64 {
        let linear = self.lipschitz * r;
        match self.cap {
            Some(c) => linear.min(c),
            None => linear,
        }
    }
}

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Zero,
    Potential {
        set: CompactSet,
        probe: Vec<f64>,
        /// `R^(2-d)`
        floor: f64,
        exponent: f64,
    },
    RadialHat { height: f64 },
    Custom(Evaluator),
}

/// A continuous test function with compact support in the ball
/// `B(support_center, support_radius)`.
#[derive(Clone)]
pub struct TestFunction {
    kind: Kind,
    dim: usize,
    support_center: Vec<f64>,
    support_radius: f64,
    modulus_model: Option<ModulusModel>,
    dirichlet: Option<f64>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            Kind::Zero => "zero",
            Kind::Potential { .. } => "potential",
            Kind::RadialHat { .. } => "radial-hat",
            Kind::Custom(_) => "custom",
        };
        f.debug_struct("TestFunction")
            .field("kind", &kind)
            .field("dim", &self.dim)
            .field("support_center", &self.support_center)
            .field("support_radius", &self.support_radius)
            .field("modulus_model", &self.modulus_model)
            .field("dirichlet", &self.dirichlet)
            .finish()
    }
}

impl TestFunction {
    /// `phi = 0`.
    pub fn zero(dim: usize) -> Self {
        TestFunction {
            kind: Kind::Zero,
            dim,
            support_center: alloc::vec![0.0; dim],
            support_radius: 0.0,
            modulus_model: Some(ModulusModel { lipschitz: 0.0, cap: Some(0.0) }),
            dirichlet: Some(0.0),
        }
    }

    /// `height * max(1 - |x - center| / radius, 0)`.
    pub fn radial_hat(center: Vec<f64>, radius: f64, height: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !height.is_finite() {
            return Err(Error::InvalidParameter("hat radius must be positive"));
        }
        let dim = center.len();
        let slope = height.abs() / radius;
        // |grad| = slope on the ball, zero outside
        let dirichlet = slope * slope * unit_sphere_area(dim) * powf(radius, dim as f64) / dim as f64;
        Ok(TestFunction {
            kind: Kind::RadialHat { height },
            dim,
            support_center: center,
            support_radius: radius,
            modulus_model: Some(ModulusModel { lipschitz: slope, cap: Some(height.abs()) }),
            dirichlet: Some(dirichlet),
        })
    }

    /// Wraps an arbitrary continuous function supported in
    /// `B(center, support_radius)`. No closed-form modulus or Dirichlet
    /// integral is attached; see [`TestFunction::with_modulus_model`] and
    /// [`TestFunction::with_dirichlet`].
    pub fn custom<F>(center: Vec<f64>, support_radius: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if !(support_radius > 0.0 && support_radius.is_finite()) {
            return Err(Error::InvalidParameter("support radius must be positive"));
        }
        Ok(TestFunction {
            kind: Kind::Custom(Arc::new(f)),
            dim: center.len(),
            support_center: center,
            support_radius,
            modulus_model: None,
            dirichlet: None,
        })
    }

    pub fn with_modulus_model(mut self, model: Option<ModulusModel>) -> Self {
        self.modulus_model = model;
        self
    }

    pub fn with_dirichlet(mut self, dirichlet: Option<f64>) -> Self {
        self.dirichlet = dirichlet;
        self
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        match &self.kind {
            Kind::Zero => 0.0,
            Kind::Potential { set, probe, floor, exponent } => {
                let t = dist(probe, x) + set.distance(x);
                (powf(t, *exponent) - floor).max(0.0)
            }
            Kind::RadialHat { height } => {
                height * (1.0 - dist(x, &self.support_center) / self.support_radius).max(0.0)
            }
            Kind::Custom(f) => {
                if dist(x, &self.support_center) >= self.support_radius {
                    0.0
                } else {
                    f(x)
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support_center(&self) -> &[f64] {
        &self.support_center
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn modulus_model(&self) -> Option<ModulusModel> {
        self.modulus_model
    }

    /// Closed-form value or upper bound for `D[phi]`.
    pub fn dirichlet(&self) -> Option<f64> {
        self.dirichlet
    }

    /// The exterior point `y` of a potential test function.
    pub fn probe(&self) -> Option<&[f64]> {
        match &self.kind {
            Kind::Potential { probe, .. } => Some(probe),
            _ => None,
        }
    }

    pub(crate) fn hat_height(&self) -> Option<f64> {
        match self.kind {
            Kind::RadialHat { height } => Some(height),
            _ => None,
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self.kind, Kind::Zero)
    }
}

/// The test function that turns the discrepancy bound into a potential
/// estimate at the exterior point `y`:
///
/// `phi(x) = max((|y - x| + d_E(x))^(2-d) - R^(2-d), 0)`, `R = diam(E) + d_E(y) + 1`.
///
/// Lipschitz with constant `2(d-2) sqrt(d) d_E(y)^(1-d)`. The attached
/// Dirichlet bound splits `R^d` at `|x - y| = d_E(y)`, using
/// `|grad phi| <= 2(d-2) t^(1-d)` with `t >= max(|x - y|, d_E(y))`:
///
/// `D[phi] <= 4(d-2) omega_d ((d-2) delta^(2-d) / d + delta^(2-d) - R^(2-d))`.
pub fn phi_for_potential(set: &CompactSet, y: &[f64], spec: &KernelSpec) -> Result<TestFunction> {
    spec.require_newtonian()?;
    let dim = set.dim();
    if y.len() != dim || spec.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: y.len() });
    }
    let delta = set.distance(y);
    if delta <= 0.0 {
        return Err(Error::InsideSet);
    }
    let d = dim as f64;
    let big_r = set.diameter() + delta + 1.0;
    let exponent = 2.0 - d;
    let floor = powf(big_r, exponent);
    let lipschitz = 2.0 * (d - 2.0) * sqrt(d) * powf(delta, 1.0 - d);
    let near = powf(delta, exponent);
    let dirichlet = 4.0 * (d - 2.0) * unit_sphere_area(dim) * ((d - 2.0) * near / d + near - floor);
    Ok(TestFunction {
        kind: Kind::Potential {
            set: set.clone(),
            probe: y.to_vec(),
            floor,
            exponent,
        },
        dim,
        support_center: y.to_vec(),
        support_radius: big_r,
        modulus_model: Some(ModulusModel { lipschitz, cap: None }),
        dirichlet: Some(dirichlet),
    })
}
