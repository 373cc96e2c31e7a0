use thiserror::Error;

use crate::families::ComplexPoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a quadratic irrational: {0}")]
    NotQuadraticIrrational(String),

    /// The expansion did not revisit a state within the step budget.
    #[error("no cycle found within {0} steps; raise max_steps")]
    BudgetExceeded(usize),

    #[error("usage error: {0}")]
    Usage(String),

    /// A theorem's predicted expansion produced a value that is not a valid
    /// partial quotient (non-integral, or non-positive where positivity is required).
    #[error("theorem encoding error: {0}")]
    TheoremEncoding(String),

    #[error("numeric failure: {message}")]
    NumericFailure {
        message: String,
        best: Vec<ComplexPoint>,
    },
}
