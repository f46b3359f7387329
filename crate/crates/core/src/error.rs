use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("header is empty")]
    EmptyHeader,
    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),
    #[error("column {index} has an empty name")]
    EmptyColumnName { index: usize },
    #[error("no objective columns (names ending in `+` or `-`)")]
    NoObjectives,
    #[error("no decision columns")]
    NoDecisions,
    #[error("objective column `{0}` must be numeric (start with an uppercase letter)")]
    SymbolicObjective(String),
    #[error("empty file")]
    EmptyFile,
    #[error("row {row}: expected {expected} cells, found {found}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("row {row}, column `{column}`: cannot parse `{value}` as a finite number")]
    BadNumber { row: usize, column: String, value: String },
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("label budget of {budget} exhausted")]
    BudgetExhausted { budget: usize },
    #[error("row {0} is not in the labelable pool")]
    NotInPool(usize),
    #[error("pool has {available} labelable rows, {requested} requested")]
    PoolTooSmall { available: usize, requested: usize },
    #[error("objective vector has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("empty objective set")]
    NoObjectiveValues,
    #[error("empty input")]
    EmptyInput,
    #[error("need at least {needed} items, got {found}")]
    TooFew { needed: usize, found: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("dataset `{0}` is degenerate for the optimality metric (random mean equals optimum)")]
    DegenerateMetric(String),
    #[error("{path}: {source}")]
    Load { path: PathBuf, source: Box<Error> },
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
