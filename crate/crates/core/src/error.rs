use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported degree {0}: only degrees 1, 2 and 3 are handled")]
    UnsupportedDegree(u32),

    #[error("dimension must be at least 1, got {0}")]
    Dimension(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid entry at row {row}, column {col}: {value}")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("column {col} has squared norm {norm_sq}, expected 1")]
    NotUnit { col: usize, norm_sq: f64 },

    #[error("element {element} is outside [1, {max}] for modulus {modulus}")]
    OutOfRange {
        element: u64,
        modulus: u64,
        max: u64,
    },

    #[error("duplicate element {0}")]
    Duplicate(u64),

    #[error("modulus must be at least 2, got {0}")]
    Modulus(u64),

    #[error("set is not Sidon-type of strength {strength} mod {modulus}: {witness} vanishes")]
    NotSidon {
        modulus: u64,
        strength: u32,
        witness: String,
    },

    #[error("frequency {m} is divisible by the modulus {n}")]
    DegenerateFrequency { m: u64, n: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("infeasible coefficients: {0}")]
    Infeasible(String),

    #[error("({d}, {n}) is not constructible: {reason}")]
    NotConstructible { d: usize, n: usize, reason: String },

    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}
