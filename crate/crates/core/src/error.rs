use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::InstanceViolation;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An explicit expansion (n-fold matrix, brick list) exceeds its limit.
    ExpansionTooLarge {
        requested: String,
        limit: String,
    },
    MatrixTooLargeForTuCheck {
        rows: usize,
        cols: usize,
    },
    DimensionMismatch(String),
    InvalidInstance(Vec<InstanceViolation>),
    /// A symmetric aggregate fails the feasibility conditions.
    NotFeasible,
    /// A brick polytope is unbounded even after bound tightening.
    UnboundedBrickSpace,
    PointNotInPolytope,
    UnboundedRegion,
    /// The LP relaxation of an integer program is unbounded below.
    UnboundedInteger,
    NodeLimitExceeded {
        limit: u64,
    },
    /// An LP vertex that should be integral was not, so the matrix is not
    /// totally unimodular.
    NonIntegralVertex,
    TooManyBricks {
        limit: usize,
    },
    ScaleTooLarge(String),
    InconsistentMargins {
        type_index: usize,
    },
    InvalidTable(String),
}

impl Error {
    /// True for errors caused by hitting a configured resource cap rather than
    /// by the input itself.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::ExpansionTooLarge { .. }
                | Error::MatrixTooLargeForTuCheck { .. }
                | Error::NodeLimitExceeded { .. }
                | Error::TooManyBricks { .. }
                | Error::ScaleTooLarge(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ExpansionTooLarge { requested, limit } => {
                write!(
                    f,
                    "explicit expansion of size {requested} exceeds limit {limit}"
                )
            }
            Error::MatrixTooLargeForTuCheck { rows, cols } => write!(
                f,
                "{rows}x{cols} matrix is too large for exhaustive unimodularity check"
            ),
            Error::DimensionMismatch(what) => write!(f, "dimension mismatch: {what}"),
            Error::InvalidInstance(violations) => {
                write!(f, "invalid instance:")?;
                for v in violations {
                    write!(f, " {v};")?;
                }
                Ok(())
            }
            Error::NotFeasible => write!(f, "symmetric aggregate is not feasible"),
            Error::UnboundedBrickSpace => write!(f, "brick polytope is unbounded"),
            Error::PointNotInPolytope => write!(f, "point does not lie in the polytope"),
            Error::UnboundedRegion => write!(f, "feasible region is unbounded"),
            Error::UnboundedInteger => write!(f, "integer program is unbounded"),
            Error::NodeLimitExceeded { limit } => {
                write!(f, "branch-and-bound node limit {limit} exceeded")
            }
            Error::NonIntegralVertex => write!(
                f,
                "LP vertex is fractional; the constraint matrix is not totally unimodular"
            ),
            Error::TooManyBricks { limit } => write!(f, "more than {limit} bricks to enumerate"),
            Error::ScaleTooLarge(what) => write!(f, "instance too large for brute force: {what}"),
            Error::InconsistentMargins { type_index } => write!(
                f,
                "type {type_index}: column sums and row sums have different totals"
            ),
            Error::InvalidTable(what) => write!(f, "invalid table: {what}"),
        }
    }
}

impl core::error::Error for Error {}
