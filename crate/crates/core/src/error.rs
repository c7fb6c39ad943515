use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1, got {0}")]
    InvalidDegree(u32),
    #[error("field order {0} exceeds the supported maximum 2^20")]
    FieldTooLarge(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("cannot parse field spec {0:?}")]
    ParseField(String),
    #[error("element index {index} out of range for GF({q})")]
    ElementOutOfRange { index: u64, q: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires {expected}, field has characteristic {found}")]
    WrongCharacteristic { expected: &'static str, found: u32 },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("cannot parse polynomial: {0}")]
    ParsePoly(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("polynomial has degree 0; the hypersurface needs deg f >= 1")]
    ZeroDegree,
    #[error("f(0,0) must be 0")]
    NonzeroConstant,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial does not vanish at the origin")]
    NotThroughOrigin,
    #[error("variable index {0} out of range")]
    BadVariable(usize),
    #[error("point is not on the quadric")]
    NotOnQuadric,
    #[error("points must be distinct")]
    SamePoint,
    #[error("{what} refused: q = {q} exceeds guard {limit}")]
    GuardExceeded {
        what: &'static str,
        q: u64,
        limit: u64,
    },
    #[error("{family}: {reason}")]
    Restriction { family: &'static str, reason: String },
    #[error("search space needs {required} candidates, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("(l0, m0) must not be (0, 0)")]
    ZeroPair,
    #[error("wrong field: {0}")]
    WrongField(String),
}
