use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every crate in the workspace.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative entry {value} at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to {sum}")]
    RowSumViolation { row: usize, sum: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for alphabet of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("no convergence after {iterations} iterations (gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },
    #[error("permutation search budget exceeded: {needed} candidates, budget {budget}")]
    SearchBudgetExceeded { needed: u128, budget: u128 },
    #[error("alphabet of size {size} exceeds the limit {limit}")]
    AlphabetTooLarge { size: usize, limit: usize },
    #[error("kernel shapes differ: {0}")]
    ShapeMismatch(String),
    #[error("table {table} is not injective at input {input}")]
    NotInjective { table: String, input: usize },
    #[error("unknown fixture {0}")]
    UnknownFixture(String),
    #[error("Markov chain is not irreducible")]
    NotIrreducible,
    #[error("structural hypothesis violated: {0}")]
    StructuralViolation(String),
    #[error("no computable form for the n-letter limit: {0}")]
    UnsupportedLimit(String),
    #[error("unsupported problem size: {0}")]
    UnsupportedScale(String),
    #[error("checker verdicts violate a known implication: {0}")]
    InconsistentImplication(String),
}
