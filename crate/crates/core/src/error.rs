use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    InvalidModulus { expected: u32, got: Vec<u32> },
    #[error("field order {0} is outside the supported regime")]
    UnsupportedOrder(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field order {0} is not a perfect square")]
    NonSquareOrder(u32),
    #[error("element index {index} out of range for GF({q})")]
    InvalidElement { index: u32, q: u32 },
    #[error("fields differ: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("invalid weight system: {0}")]
    InvalidWeights(String),
    #[error("tuple has no nonzero coordinate")]
    ZeroTuple,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("enumeration of {needed} items exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("bound not applicable: {0}")]
    InapplicableBound(String),

    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not weighted homogeneous (degrees {0:?})")]
    NonHomogeneous(Vec<u32>),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("empty point set")]
    EmptyPointSet,
    #[error("code is not self-orthogonal: rows {0} and {1} are not orthogonal")]
    NotSelfOrthogonal(usize, usize),
    #[error("containment violated by {0:?}")]
    ContainmentViolated(Vec<u32>),
    #[error("vector is not a logical operator")]
    NotLogical,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("boundary of boundary nonzero at degree {degree}: entry ({row}, {col}) = {value}")]
    DifferentialSquareNonzero { degree: i64, row: usize, col: usize, value: u32 },
    #[error("degree {0} out of range")]
    DegreeOutOfRange(i64),
    #[error("filtration is empty")]
    EmptyFiltration,

    #[error("stabilizer order {0} is below 2")]
    InvalidStabilizer(u64),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    /// Process exit code: 2 usage, 3 budget, 4 internal invariant, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Parse(_) => 2,
            Error::BudgetExceeded { .. } => 3,
            Error::Invariant(_) => 4,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
