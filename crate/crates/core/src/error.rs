use crate::lowerbound::{BoundViolation, IterationTrace};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("enumeration over {states} states exceeds the limit of {limit}")]
    Capacity { states: usize, limit: usize },

    #[error("no acceptable sample after {attempts} attempts")]
    Convergence { attempts: u64 },

    #[error("lower bound is infeasible: {}", describe(.0))]
    InfeasibleBound(Vec<BoundViolation>),

    #[error("no allocation satisfies both quota and the lower bound")]
    InfeasibleTrace(Box<IterationTrace>),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("internal logic error: {0}")]
    Logic(String),

    #[error("exact arithmetic exceeds the fixed-width fast path: {0}")]
    Overflow(String),
}

fn describe(violations: &[BoundViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
