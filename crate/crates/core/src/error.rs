use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The requested field order is not a prime power.
    NotPrimePower(u64),
    /// The supplied modulus has a nontrivial factor over the base field.
    ReducibleModulus,
    /// Field parameters outside what the crate supports (t < 2, Q > 2^20, bad modulus degree).
    InvalidField(String),
    /// The supplied basis is not linearly independent over the base field.
    DependentBasis,
    /// Two interpolation points (or evaluation points) share an x-coordinate.
    DuplicatePoint,
    ZeroModulus,
    LengthMismatch {
        expected: usize,
        got: usize,
    },
    DuplicatePosition(usize),
    /// Code parameters violate `1 ≤ k ≤ n ≤ Q` or a position is out of range.
    InvalidCode(String),
    /// The given symbols do not come from a single codeword.
    InconsistentSymbols,
    /// `decompose_witness` was called on an assignment that is not a linear scheme.
    NotAScheme,
    TooLargeForExhaustive,
    /// A triple violating `j_min ≤ j_max`, `j_min < d`, `j_min ≥ 1`.
    BadTripleShape,
    NotGood,
    DimensionTooLarge,
    /// A scheme parameter constraint failed; the string names the inequality.
    ParamConstraintViolated(String),
    SupportOutOfWindow,
    InsufficientFreedom,
    TooManyErasures {
        erased: usize,
        limit: String,
    },
    MissingResponse(usize),
    DegenerateArgument,
    NotApplicable,
    InsufficientSurvivors {
        needed: usize,
        available: usize,
    },
    CoefficientNotInBase(usize),
    /// A stored block was not laid out systematically.
    NotSystematic,
    /// A deserialized scheme failed structural validation.
    InvalidScheme(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            Error::ReducibleModulus => f.write_str("modulus polynomial is reducible"),
            Error::InvalidField(msg) => write!(f, "invalid field parameters: {msg}"),
            Error::DependentBasis => f.write_str("basis is not independent over the base field"),
            Error::DuplicatePoint => f.write_str("duplicate evaluation point"),
            Error::ZeroModulus => f.write_str("reduction modulo the zero polynomial"),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::DuplicatePosition(j) => write!(f, "position {j} listed twice"),
            Error::InvalidCode(msg) => write!(f, "invalid code: {msg}"),
            Error::InconsistentSymbols => f.write_str("symbols are not from a single codeword"),
            Error::NotAScheme => f.write_str("subspaces do not form a linear evaluation scheme"),
            Error::TooLargeForExhaustive => f.write_str("instance too large for exhaustive enumeration"),
            Error::BadTripleShape => f.write_str("triple must satisfy 1 ≤ j_min ≤ j_max and j_min < d"),
            Error::NotGood => f.write_str("triple is not good for this code"),
            Error::DimensionTooLarge => f.write_str("code dimension too large for this construction"),
            Error::ParamConstraintViolated(c) => write!(f, "parameter constraint violated: {c}"),
            Error::SupportOutOfWindow => f.write_str("target support lies outside the triple's window"),
            Error::InsufficientFreedom => f.write_str("not enough free coefficients to vanish on the erasure set"),
            Error::TooManyErasures { erased, limit } => {
                write!(f, "{erased} erased nodes, scheme tolerates fewer than {limit}")
            }
            Error::MissingResponse(j) => write!(f, "no response from required node {j}"),
            Error::DegenerateArgument => f.write_str("logarithm argument is not positive"),
            Error::NotApplicable => f.write_str("bound needs n > k + 1"),
            Error::InsufficientSurvivors { needed, available } => {
                write!(f, "need {needed} surviving nodes, only {available} available")
            }
            Error::CoefficientNotInBase(i) => {
                write!(f, "coefficient {i} is not in the base field")
            }
            Error::NotSystematic => f.write_str("block was not stored systematically"),
            Error::InvalidScheme(msg) => write!(f, "invalid scheme: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
