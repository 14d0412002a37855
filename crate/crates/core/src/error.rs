use num_rational::BigRational;
use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped by how the command-line frontend maps them to exit
/// codes: domain errors, parse/usage errors and bound errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial is not a {d}-th power over the rationals")]
    NotAPower { d: u32 },

    #[error("primitive part is a {d}-th power but the constant {constant} is not")]
    ScalarNotDthPower { d: u32, constant: BigRational },

    #[error("map is not invertible: {0}")]
    NotInvertible(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("not equivariant for mu_{d}: {reason}")]
    NotEquivariant { d: u32, reason: String },

    #[error("not liftable: {0}")]
    NotLiftable(String),

    #[error("derivation is not certified locally nilpotent")]
    NotLnd,

    #[error("function is not an invariant of the derivation")]
    NotInvariant,

    #[error("character does not descend: {0}")]
    NotDescendable(String),

    #[error("matrix does not have determinant one")]
    NotDeterminantOne,

    #[error("bound {bound} too small: {reason}")]
    BoundTooSmall { bound: u64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::InvalidArgument(_) => 2,
            Error::BoundTooSmall { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
