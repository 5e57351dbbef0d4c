use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("order {order} exceeds the size guard of {limit}")]
    SizeGuard { order: u128, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("group-ring operands live in different groups")]
    GroupMismatch,

    #[error("coefficient overflow in group-ring arithmetic")]
    CoefficientOverflow,

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("covering condition fails; {uncovered} element(s) of the auxiliary group uncovered")]
    CoverFailed { uncovered: usize },

    #[error("identity D*D + D^(-1)*D^(-1) = 2G fails for m = {m}; {defect_support} element(s) in the defect support")]
    IdentityDefect { m: u32, defect_support: usize },

    #[error("generating set is invalid: {0}")]
    InvalidGeneratingSet(String),

    #[error("cannot reach degree {target}: {reason}")]
    DegreeUnreachable { target: usize, reason: String },

    #[error("Cayley graph is disconnected: generating set reaches {reached} of {order} vertices")]
    Disconnected { reached: usize, order: usize },

    #[error("diameter methods disagree: {0}")]
    OracleMismatch(String),

    #[error("certificate has not been verified")]
    Unverified,

    #[error("bound violation at degree {degree}: {detail}")]
    BoundViolation { degree: usize, detail: String },

    #[error("search bounds too large: {0}")]
    SearchExplosion(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
