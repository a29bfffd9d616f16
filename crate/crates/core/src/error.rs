use thiserror::Error;

use crate::io::DocumentError;
use crate::pair::PairViolation;
use crate::pmq::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Tables of the wrong shape, indices out of range, and similar input defects.
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Document(#[from] DocumentError),

    #[error("PMQ axioms violated: {}", summarize(.0))]
    PmqAxioms(Vec<Violation>),

    #[error("PMQ-group pair axioms violated: {}", summarize(.0))]
    PairAxioms(Vec<PairViolation>),

    /// An operation was called on a structure lacking a required property
    /// (missing norm, non-trivial product, subset not conjugation closed, ...).
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("budget exceeded: {what} needs {needed} states but the budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        budget: u64,
    },

    #[error("arguments refer to different PMQs")]
    ParentMismatch,

    /// Two independent computations disagreed. Always a bug or an invalid pair.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

fn summarize<T: std::fmt::Display>(items: &[T]) -> String {
    let shown: Vec<String> = items.iter().take(3).map(|v| v.to_string()).collect();
    let more = items.len().saturating_sub(3);
    if more > 0 {
        format!("{} (+{more} more)", shown.join("; "))
    } else {
        shown.join("; ")
    }
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Budget,
    MalformedInput,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::PmqAxioms(_) | Error::PairAxioms(_) | Error::Precondition(_) => {
                ErrorKind::Validation
            }
            Error::BudgetExceeded { .. } => ErrorKind::Budget,
            Error::Malformed(_) | Error::Document(_) | Error::ParentMismatch => ErrorKind::MalformedInput,
            Error::Inconsistent(_) => ErrorKind::Internal,
        }
    }
}

pub(crate) fn check_budget(what: &str, needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded {
            what: what.to_string(),
            needed,
            budget,
        })
    } else {
        Ok(())
    }
}
