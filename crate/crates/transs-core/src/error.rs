//! Kernel error type.

use std::fmt;

/// Everything that can go wrong inside the kernel.
///
/// The variants are coarse on purpose: callers dispatch on the kind (the
/// CLI maps kinds to exit codes), and the embedded strings carry whatever
/// detail is useful for a human.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Multi-index operands of different dimensions.
    DimensionMismatch { left: usize, right: usize },
    /// An operation that needs a nonzero series got zero.
    ZeroSeries,
    /// A comparison could not be decided within the stored accuracy.
    UnresolvedOrder,
    /// The purely large part of a series is hidden behind a bound that is
    /// not smaller than 1, so additive splitting is ambiguous.
    LargeTailUnresolved,
    /// A scalar exp/log/power left the rationals.
    NonRationalConstant(String),
    /// Argument must be positive.
    NotPositive,
    /// Composition requires a large, positive right operand.
    NotLargePositive,
    /// Smallness addendum requires a small series.
    NotSmall,
    /// Support is not contained in the grid generated by the ratio set.
    NotInGrid,
    /// Integration of e^T requires T large.
    NotLarge,
    /// Power-free integration got a monomial with a nonzero x-exponent.
    NotPowerFree,
    /// Nonsensical parameters (detail in the message).
    InvalidParameters(String),
    /// A Taylor loop did not reach the requested bound within its cap.
    BudgetExceeded { max_terms: usize },
    /// Fixed-point iteration did not stabilize. Carries a rendering of the
    /// last few difference supports for debugging.
    NoStabilization {
        iterations: usize,
        last_diff_supports: Vec<Vec<String>>,
    },
    /// Numeric evaluation outside the domain (log of a nonpositive value).
    DomainError(String),
    /// A monomial exponent must be an exact (finite) purely large series.
    InexactExponent,
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { left, right } => {
                write!(f, "multi-index dimension mismatch: {left} vs {right}")
            }
            Error::ZeroSeries => write!(f, "operation undefined for the zero series"),
            Error::UnresolvedOrder => {
                write!(f, "order undecidable within the stored accuracy bound")
            }
            Error::LargeTailUnresolved => {
                write!(f, "purely large part not fully known (bound is not < 1)")
            }
            Error::NonRationalConstant(what) => {
                write!(f, "scalar result is not rational: {what}")
            }
            Error::NotPositive => write!(f, "argument must be positive"),
            Error::NotLargePositive => {
                write!(f, "composition requires a large positive inner series")
            }
            Error::NotSmall => write!(f, "series is not small"),
            Error::NotInGrid => write!(f, "support not contained in the generated grid"),
            Error::NotLarge => write!(f, "exponent must be a large series"),
            Error::NotPowerFree => write!(f, "series has a monomial with nonzero x-exponent"),
            Error::InvalidParameters(msg) => write!(f, "invalid parameters: {msg}"),
            Error::BudgetExceeded { max_terms } => {
                write!(
                    f,
                    "expansion did not reach the requested bound within {max_terms} terms"
                )
            }
            Error::NoStabilization { iterations, .. } => {
                write!(f, "iteration did not stabilize after {iterations} steps")
            }
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::InexactExponent => {
                write!(f, "monomial exponent must be an exact purely large series")
            }
        }
    }
}

impl std::error::Error for Error {}
