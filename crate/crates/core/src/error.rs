use core::fmt;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Kernel parameters outside `0 < alpha < dim`, `dim >= 3`.
    InvalidKernel { alpha: f64, dim: usize },
    /// The kernel was evaluated at a zero displacement.
    Singular,
    /// Two configuration points coincide, so the pair energy is infinite.
    CoincidentPoints { first: usize, second: usize },
    /// A point or configuration has the wrong ambient dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// The operation needs at least `needed` points.
    TooFewPoints { needed: usize, found: usize },
    /// The operation is only defined for the Newtonian kernel (`alpha = 2`).
    NotNewtonian { alpha: f64 },
    /// A set definition is malformed.
    InvalidSet(&'static str),
    /// A numeric parameter is out of range.
    InvalidParameter(&'static str),
    /// No equilibrium oracle exists for this kernel/set combination.
    UnsupportedOracle,
    /// A point that must lie in the set does not.
    NotInSet,
    /// A point that must lie outside the set does not.
    InsideSet,
    /// The set carries no Hoelder data for its Green function.
    MissingHolder,
    /// A candidate list is empty.
    EmptyCandidates,
    /// Coordinates contain NaN or infinity.
    NonFinite,
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidKernel { alpha, dim } => write!(
                f,
                "invalid Riesz kernel: need 0 < alpha < dim and dim >= 3, got alpha = {alpha}, dim = {dim}"
            ),
            Error::Singular => write!(f, "kernel evaluated at zero displacement"),
            Error::CoincidentPoints { first, second } => {
                write!(f, "points {first} and {second} coincide")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::TooFewPoints { needed, found } => {
                write!(f, "need at least {needed} points, found {found}")
            }
            Error::NotNewtonian { alpha } => {
                write!(f, "operation requires the Newtonian kernel (alpha = 2), got alpha = {alpha}")
            }
            Error::InvalidSet(msg) => write!(f, "invalid set: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::UnsupportedOracle => {
                write!(f, "no equilibrium oracle for this kernel and set")
            }
            Error::NotInSet => write!(f, "point does not lie in the set"),
            Error::InsideSet => write!(f, "point must lie outside the set"),
            Error::MissingHolder => write!(f, "set has no Hoelder data"),
            Error::EmptyCandidates => write!(f, "candidate list is empty"),
            Error::NonFinite => write!(f, "non-finite coordinate"),
        }
    }
}

impl core::error::Error for Error {}
