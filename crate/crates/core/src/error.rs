use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix dimensions do not match: {0}")]
    Shape(String),
    #[error("characteristic polynomial is not a product of (x^d - 1) factors")]
    NotFrameShaped,
    #[error("invalid rank {rank} for root system {kind}")]
    InvalidRank { kind: String, rank: usize },
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("lattice is not integral")]
    NotIntegral,
    #[error("lattice is not even")]
    NotEven,
    #[error("matrix does not preserve the gram matrix or is not invertible over Z")]
    NotAnIsometry,
    #[error("isometry has nonzero fixed vectors")]
    FixedPointsPresent,
    #[error("isometry acts nontrivially on the discriminant group")]
    DiscriminantActionNontrivial,
    #[error("n^2 rho must be integral (n = {n}, rho = {rho})")]
    BadWeightDenominator { n: u64, rho: String },
    #[error("element is not a member of the space")]
    NotMember,
    #[error("invalid finite quadratic space: {0}")]
    InvalidSpace(String),
    #[error("image of basis vector leaves the Leech lattice")]
    NotLeechStabilizing,
    #[error("invalid monomial isometry: {0}")]
    InvalidMonomial(String),
    #[error("search budget exhausted after {0} candidates")]
    BudgetExhausted(u64),
    #[error("certification failed on {field}: expected {expected}, computed {computed}")]
    CertificationFailed {
        field: String,
        expected: String,
        computed: String,
    },
    #[error("unknown class label {0:?}")]
    UnknownClass(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
