use thiserror::Error;

/// Errors raised by the algebraic modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),

    #[error("n must be at least 1")]
    DegreeTooSmall,

    #[error("parameters too large: {0}")]
    Overflow(String),

    #[error("non-unit degree: e = {value} is divisible by {p}")]
    NonUnitDegree { value: String, p: u64 },

    #[error("{value} is not an element of Z_({p}): its denominator is divisible by {p}")]
    NotLocal { value: String, p: u64 },

    #[error("division by the non-unit {divisor} in Z_({p})")]
    NonUnitDivisor { divisor: String, p: u64 },

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("invalid number literal {0:?}")]
    BadLiteral(String),

    #[error("{value} has valuation {valuation} at {p}, expected a unit")]
    NotAUnit { value: String, valuation: String, p: u64 },

    #[error("operands carry different symbol parameters")]
    ParamsMismatch,

    #[error("exponent {exponent} outside [0, {max}]")]
    ExponentOutOfRange { exponent: u64, max: u64 },

    #[error("not an endomorphism of the split motive: support {0} is off the anti-diagonal")]
    NotEndomorphism(String),

    #[error("tuple length {got} does not match p = {p}")]
    TupleLength { got: usize, p: u64 },

    #[error("not invertible: entry {index} = {value} has positive valuation")]
    NotInvertible { index: usize, value: String },

    #[error("no composition identity in the split span: composition power must be at least 1")]
    NoCompositionIdentity,

    #[error("bidegree ({i},{j}) is outside the classification range i > j")]
    OutsideClassification { i: i64, j: i64 },

    #[error("row index j = {j} outside [0, {d}]")]
    RowOutOfRange { j: i64, d: u64 },

    #[error("index {index} outside [{min}, {max}]")]
    IndexOutOfRange { index: i64, min: i64, max: i64 },

    #[error("operation {0} requires p >= 3")]
    PrimeTooSmall(&'static str),

    #[error("recurrence inconsistency at j = {j}: {detail}")]
    RecurrenceInconsistency { j: u64, detail: String },

    #[error("bound not satisfied: {0}")]
    BoundNotSatisfied(String),

    #[error("cannot audit: {0}")]
    CannotAudit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
