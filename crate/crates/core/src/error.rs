//! Error type shared by every module in the crate.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied argument is outside the documented domain.
    InvalidArgument(String),
    /// No prefix of the reciprocal weight sums reached the requested bound.
    DivergenceNotWitnessed {
        bound: f64,
        k_max: usize,
        reached: f64,
    },
    /// The breakpoint grid is too large for the exhaustive search.
    ExactModeRefused { breakpoints: usize, limit: usize },
    /// The gauge vanishes at a scale where the criterion divides by it.
    DegenerateModulus { n: usize },
    /// The simplified criterion term requires p >= q.
    CorollaryInapplicable { p: f64, q: f64 },
    /// Grid enumeration is only offered in low dimension.
    GridRefused { n: usize, max: usize },
    /// No scale within the search limit violates the boundedness criterion.
    CriterionNotViolated { stage: usize, n_limit: usize },
    /// A numeric certificate missed its guaranteed bound.
    CertificationFailure(String),
    /// An internal invariant was violated; indicates a bug, not bad input.
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DivergenceNotWitnessed {
                bound,
                k_max,
                reached,
            } => write!(
                f,
                "divergence not witnessed: partial sums reach {reached} < {bound} within k <= {k_max}"
            ),
            Error::ExactModeRefused { breakpoints, limit } => write!(
                f,
                "exact mode refused: {breakpoints} breakpoints exceed the limit {limit}; use the greedy lower bound"
            ),
            Error::DegenerateModulus { n } => {
                write!(f, "degenerate modulus: omega(1/{n}) = 0")
            }
            Error::CorollaryInapplicable { p, q } => {
                write!(f, "corollary inapplicable: requires p >= q, got p = {p}, q = {q}")
            }
            Error::GridRefused { n, max } => {
                write!(f, "grid enumeration refused: dimension {n} exceeds {max}")
            }
            Error::CriterionNotViolated { stage, n_limit } => write!(
                f,
                "criterion not violated at this scale: stage {stage} found no n <= {n_limit}"
            ),
            Error::CertificationFailure(msg) => write!(f, "certification failure: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
