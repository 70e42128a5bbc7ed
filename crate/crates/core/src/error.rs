use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("all inputs are zero")]
    AllZero,

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("totally null span: restricted form vanishes identically")]
    TotallyNullSpan,

    #[error("subspace carries a degenerate restricted form")]
    DegenerateSubspace,

    #[error("vacuous source form: r + s = 0")]
    VacuousSourceForm,

    #[error("invalid map pair: {0}")]
    InvalidMapPair(String),

    #[error("image in indeterminacy locus: projected {component} is identically zero")]
    IndeterminateProjection { component: &'static str },

    #[error("component is not linear after primitive normalization")]
    NonLinear,

    #[error("plane hypothesis violated: measured l' = {measured} > 2l - 1 = {bound}")]
    HypothesisViolated { measured: i64, bound: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("incompatible generator spec: {0}")]
    IncompatibleSpec(String),

    #[error("non-polynomial composite: {0}")]
    NonPolynomial(String),
}
