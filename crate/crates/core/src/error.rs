use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("division by the zero function")]
    DivisionByZero,

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },

    #[error("denominator vanishes at the evaluation point")]
    Pole,

    #[error("coefficient denominator is not invertible modulo {p}")]
    NonInvertibleModulus { p: u64 },

    #[error("substitution lands identically on a pole")]
    DegenerateSpecialization,

    #[error("function must be non-constant with positive arity")]
    ConstantFunction,

    #[error("unsupported arity {0}: only 2 and 3 variables are supported here")]
    UnsupportedArity(usize),

    #[error("every sample point hit a pole")]
    AllSamplesPoles,

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("degree guard exceeded: degree {degree} > {limit}")]
    GuardExceeded { degree: u64, limit: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
