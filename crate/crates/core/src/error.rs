use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level must be a positive integer, got {0}")]
    InvalidLevel(i64),

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("matrix with determinant {det} is not invertible mod {level}")]
    NonInvertible { det: u32, level: u32 },

    #[error("generator with determinant {det} is not invertible mod {level}")]
    NonInvertibleGenerator { det: u32, level: u32 },

    #[error("bad factorization of {n}: {reason}")]
    BadFactorization { n: u32, reason: String },

    #[error("split {m1}·{m2} is not a coprime factorization of {m}")]
    BadSplit { m: u32, m1: u32, m2: u32 },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    TooLarge { order: usize, bound: usize },

    #[error("quotient pairing is not an isomorphism: {0}")]
    QuotientMismatch(String),

    #[error("ambient group of order {order} exceeds the enumeration budget {budget}")]
    BudgetExceeded { order: u64, budget: u64 },

    #[error("{0} is not a fundamental discriminant other than 1")]
    NotFundamental(i64),

    #[error("division by the zero function")]
    DivisionByZeroFunction,

    #[error("family is singular: discriminant vanishes identically")]
    SingularFamily,

    #[error("delta squared does not equal the product of the two discriminants")]
    DeltaMismatch,

    #[error("identity failed: {0}")]
    IdentityFailure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
