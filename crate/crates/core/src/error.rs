use thiserror::Error;

use crate::machine::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate input symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("cells do not partition the state set: {0}")]
    NonPartition(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown input symbol `{0}`")]
    UnknownSymbol(String),
    #[error("set belongs to a different approximation space")]
    MismatchedSpace,
    #[error("input alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("map is not total: {0}")]
    Totality(String),
    #[error("state map is not onto: `{0}` has no preimage")]
    NotOnto(String),
    #[error("search space of {size} exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid machine ({} violation(s)): {}", .0.len(), .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidMachine(Vec<Violation>),
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("{line}: {part} set of ({state}, {symbol}) is not a union of blocks")]
    NonDefinableEntry {
        line: usize,
        state: String,
        symbol: String,
        part: &'static str,
    },
}
