//! Crate-wide error type.

use std::fmt;

/// Errors surfaced by the evaluation and reconstruction pipeline.
#[derive(Debug)]
pub enum Error {
    /// Series summation hit the term cap before the remainder bound was met.
    NonConvergence { terms: usize },
    /// The asymptotic expansion cannot reach the requested tolerance at this
    /// argument; `achievable` is the best estimate it could certify.
    Regime { achievable: f64, requested: f64 },
    /// Parameters outside the supported domain.
    Domain(String),
    /// Invalid basis mode index, e.g. the nonexistent (2, 0) mode.
    InvalidIndex { k: u8, n: u32 },
    /// A mode matrix came out non-positive; signals an upstream accuracy bug,
    /// never an expected runtime condition.
    SingularSystem { det: f64 },
    /// Adaptive quadrature hit the refinement depth cap.
    QuadratureFailure { depth: usize },
    /// Malformed input file.
    Format(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergence { terms } => {
                write!(f, "series did not converge within {terms} terms")
            }
            Error::Regime {
                achievable,
                requested,
            } => write!(
                f,
                "asymptotic expansion reaches {achievable:.3e} but {requested:.3e} was requested"
            ),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidIndex { k, n } => write!(f, "invalid mode index ({k}, {n})"),
            Error::SingularSystem { det } => {
                write!(f, "mode matrix is numerically singular (det = {det:e})")
            }
            Error::QuadratureFailure { depth } => {
                write!(f, "adaptive quadrature exceeded depth cap {depth}")
            }
            Error::Format(msg) => write!(f, "format error: {msg}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
