use thiserror::Error;

/// Error vocabulary shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient tuple must not be empty")]
    EmptyTuple,
    #[error("coefficients must be positive, got {0}")]
    NonPositiveCoefficient(u64),
    #[error("operation needs at least {needed} coefficients, got {got}")]
    TooShortTuple { needed: usize, got: usize },
    #[error("coefficients are not coprime (gcd {gcd})")]
    NotCoprime { gcd: u64 },
    #[error("{x} has no inverse modulo {modulus}")]
    NotInvertible { x: u64, modulus: u64 },
    #[error("coefficient index {index} is past the tuple length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("oracle enumeration of about {estimate} points exceeds the budget of {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },
    #[error("bound does not apply: n = {n} is below s-_k = {threshold}")]
    NotApplicable { n: u64, threshold: String },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
