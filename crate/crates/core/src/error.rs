use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("expected a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("matrix is not diagonal: {0}")]
    NotDiagonal(String),
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("wrong Schmidt rank: expected {expected}, found {found}")]
    WrongSchmidtRank { expected: String, found: usize },
    #[error("inner blocks too small: m1*n1 = {outer} exceeds m2*n2 = {inner}")]
    ShapeTooSmall { outer: usize, inner: usize },
    #[error("factor family is linearly dependent: {0}")]
    DependentFamilies(String),
    #[error("span contains no full-rank matrix: {0}")]
    NoFullRankInSpan(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("search space has {size} instances, budget is {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
