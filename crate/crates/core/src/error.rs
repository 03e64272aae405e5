use thiserror::Error;

use crate::milnor::BiDegree;
use crate::resolution::ExtChart;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke a documented precondition (dimension or degree mismatch).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("bidegree {degree} is outside the configured window (max stem {max_stem})")]
    Window { degree: BiDegree, max_stem: i32 },

    #[error("parse error at position {position} (token `{token}`): {message}")]
    Parse {
        position: usize,
        token: String,
        message: String,
    },

    #[error("P_{t} is not exterior on {module}: P_{t}^2 is nonzero at {degree}")]
    NotExterior {
        t: u32,
        module: String,
        degree: BiDegree,
    },

    #[error("invariant `{check}` violated: {witness}")]
    InvariantViolation { check: String, witness: String },

    /// The resolver hit a configured resource bound. The chart covers every
    /// stem strictly below `completed_stem + 1`.
    #[error("resource bound exceeded at stem {stopped_at}; result is complete through stem {completed_stem}")]
    ResourceBound {
        completed_stem: i32,
        stopped_at: i32,
        partial: Box<ExtChart>,
    },

    #[error("format error in field `{field}`: {message}")]
    Format { field: String, message: String },
}

impl Error {
    pub(crate) fn window(degree: BiDegree, max_stem: i32) -> Self {
        Error::Window { degree, max_stem }
    }

    pub(crate) fn invariant(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::InvariantViolation {
            check: check.into(),
            witness: witness.into(),
        }
    }
}
