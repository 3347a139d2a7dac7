use core::fmt;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its documented domain.
    InvalidParameter {
        /// Parameter name.
        name: &'static str,
        /// What is wrong with it.
        reason: &'static str,
    },
    /// Operand dimensions do not agree.
    DimensionMismatch {
        /// Dimension the operation expected.
        expected: usize,
        /// Dimension it received.
        found: usize,
    },
    /// A matrix that must be Hermitian (or unitary) is not, within tolerance.
    NotHermitian {
        /// Largest entry-wise deviation found.
        deviation: f64,
    },
    /// A projection or normalization produced a zero vector.
    DegenerateInput(&'static str),
    /// An iterative routine did not converge.
    NoConvergence(&'static str),
    /// Adaptive quadrature stopped at the evaluation cap before reaching
    /// its tolerance.
    QuadratureTolerance {
        /// Best estimate of the integral.
        estimate: f64,
        /// Estimated absolute error of `estimate`.
        error_bound: f64,
        /// Integrand evaluations spent.
        evaluations: usize,
    },
    /// A NaN or infinity appeared where a finite value is required.
    NonFinite(&'static str),
    /// Two eigenvalues are too close to tell the branches apart.
    NearDegenerate {
        /// Normalized time where it happened.
        s: f64,
        /// Gap between the two levels.
        gap: f64,
    },
    /// The schedule does not provide analytic derivatives.
    UnsupportedSchedule,
    /// `tan(theta0 / 2) < theta0`: no real `omega * tau` exists.
    InfeasibleAngle {
        /// Offending angle.
        theta0: f64,
    },
    /// Angle outside `(0, pi)`.
    AngleOutOfDomain {
        /// Offending angle.
        theta0: f64,
    },
    /// A bracketing search ran past its range without finding a root.
    RangeExhausted {
        /// Last lower bound tried.
        lo: f64,
        /// Last upper bound tried.
        hi: f64,
    },
    /// Data handed to a fit is unusable.
    InvalidData(&'static str),
}

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Whether this error comes from a numerical failure rather than from bad
    /// input. Front ends map the two classes to different exit codes.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_)
                | Error::QuadratureTolerance { .. }
                | Error::NonFinite(_)
                | Error::NearDegenerate { .. }
                | Error::RangeExhausted { .. }
                | Error::NotHermitian { .. }
                | Error::DegenerateInput(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotHermitian { deviation } => {
                write!(f, "operator is not Hermitian (deviation {deviation:e})")
            }
            Error::DegenerateInput(what) => write!(f, "degenerate input: {what}"),
            Error::NoConvergence(what) => write!(f, "{what} did not converge"),
            Error::QuadratureTolerance { estimate, error_bound, evaluations } => write!(
                f,
                "quadrature tolerance not reached after {evaluations} evaluations \
                 (estimate {estimate}, error bound {error_bound:e})"
            ),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::NearDegenerate { s, gap } => {
                write!(f, "levels nearly degenerate at s = {s} (gap {gap:e})")
            }
            Error::UnsupportedSchedule => {
                write!(f, "schedule has no analytic derivatives")
            }
            Error::InfeasibleAngle { theta0 } => {
                write!(f, "angle {theta0} is infeasible: tan(theta0/2) < theta0 gives no real omega*tau")
            }
            Error::AngleOutOfDomain { theta0 } => {
                write!(f, "angle {theta0} outside (0, pi)")
            }
            Error::RangeExhausted { lo, hi } => {
                write!(f, "search range exhausted in [{lo}, {hi}]")
            }
            Error::InvalidData(what) => write!(f, "invalid data: {what}"),
        }
    }
}

impl core::error::Error for Error {}
