use thiserror::Error;

use crate::{Value, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable index {var} out of range (problem has {num_vars} variables)")]
    VarOutOfRange { var: Var, num_vars: usize },

    #[error("value {value} out of range 1..={max}")]
    ValueOutOfRange { value: Value, max: Value },

    #[error("expected {expected} domains, got {got}")]
    DomainCount { expected: usize, got: usize },

    #[error("constraint {index} is malformed: {reason}")]
    MalformedConstraint { index: usize, reason: String },

    #[error("invalid value partition: {0}")]
    InvalidPartition(String),

    #[error("assignment is partial (variable {0} unassigned)")]
    PartialAssignment(Var),

    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("dimacs line {line}: {reason}")]
    Dimacs { line: usize, reason: String },

    #[error("cannot reduce formula: {0}")]
    Reduction(String),

    #[error("invalid strategy: {0}")]
    Strategy(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
