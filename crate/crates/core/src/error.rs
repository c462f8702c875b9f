use thiserror::Error;

/// Errors raised by construction and certification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("zero vector is not a projective point")]
    ZeroPoint,
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field mismatch: scalars live in different extensions")]
    FieldMismatch,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("group closure exceeded bound {0}")]
    ClosureBound(usize),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
