use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Only `S^1` and `S^2` are supported.
    UnsupportedDimension(usize),
    ResolutionTooSmall {
        resolution: usize,
        minimum: usize,
    },
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    /// A derivative of a norm was requested at the origin.
    ZeroVector,
    InvalidParameter(&'static str),
    /// The norm does not satisfy `D²(½F²) > 0` on the sampled directions.
    NotConvex {
        min_eigenvalue: f64,
    },
    DualNotConverged {
        residual: f64,
    },
    NonPositiveRadius {
        node: usize,
        value: f64,
    },
    NonFinite(&'static str),
    /// The surface is not strictly F-mean convex at some node.
    NotMeanConvex {
        node: usize,
        value: f64,
    },
    InvalidExponent(f64),
    NegativeArgument(f64),
    StepLimit {
        steps: usize,
        time: f64,
    },
    /// The stable step collapsed (typically `H_F → 0` somewhere).
    StepCollapse {
        dt: f64,
        time: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedDimension(d) => {
                write!(f, "unsupported dimension {d} (expected 1 or 2)")
            }
            Error::ResolutionTooSmall {
                resolution,
                minimum,
            } => {
                write!(f, "resolution {resolution} too small (minimum {minimum})")
            }
            Error::LengthMismatch { expected, found } => {
                write!(
                    f,
                    "length mismatch: expected {expected} samples, found {found}"
                )
            }
            Error::ZeroVector => write!(f, "derivative of a norm requested at the origin"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NotConvex { min_eigenvalue } => write!(
                f,
                "norm is not uniformly convex: min eigenvalue of D²(F²/2) is {min_eigenvalue:e}"
            ),
            Error::DualNotConverged { residual } => {
                write!(
                    f,
                    "dual norm maximisation did not converge (residual {residual:e})"
                )
            }
            Error::NonPositiveRadius { node, value } => {
                write!(
                    f,
                    "radial function is not positive at node {node} ({value:e})"
                )
            }
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::NotMeanConvex { node, value } => write!(
                f,
                "flow left the strictly F-mean-convex class: H_F = {value:e} at node {node}"
            ),
            Error::InvalidExponent(p) => write!(f, "momentum exponent must be >= 1, got {p}"),
            Error::NegativeArgument(s) => write!(f, "argument must be non-negative, got {s}"),
            Error::StepLimit { steps, time } => {
                write!(
                    f,
                    "step limit {steps} reached at t = {time} before the end time"
                )
            }
            Error::StepCollapse { dt, time } => {
                write!(f, "stable step collapsed to {dt:e} at t = {time}")
            }
        }
    }
}

impl core::error::Error for Error {}
