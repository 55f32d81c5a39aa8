use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A Laurent product or inversion lost more truncation order than the
    /// requested window provides.
    #[error("validity budget exhausted: needed order {needed}, have {available}")]
    ValidityExhausted { needed: i64, available: i64 },

    #[error("not a unit: no nonzero coefficient within the trusted window")]
    NotAUnit,

    #[error("log1p requires a series with zero constant term")]
    NonzeroConstantTerm,

    #[error("leading t-exponent {exp} is below the kernel range (minimum {min})")]
    LeadingExponentTooLow { exp: i64, min: i64 },

    #[error("non-integer value {value} recovered at class {class}, genus {genus}")]
    StrictIntegrality {
        class: String,
        genus: u32,
        value: String,
    },

    #[error("series does not have super-rigid shape: {0}")]
    NotSuperRigidShape(String),

    #[error("mass cap admits more than {bound} classes")]
    ClassEnumerationTooLarge { bound: usize },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("line {line}: expected {expected} coordinates, got {got}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        got: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}
