use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in the cyclotomic field")]
    DivisionByZero,
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("level p = {0} is not supported (need p >= 2)")]
    InvalidLevel(u32),
    #[error("no square root of {0} is available in this field")]
    UnsupportedRadicand(u32),
    #[error("operands belong to different algebras ({0})")]
    AlgebraMismatch(String),
    #[error("tensor arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("element does not lie in the restricted subalgebra: {0}")]
    NotInSubalgebra(String),
    #[error("construction check failed: {0}")]
    Construction(String),
    #[error("linear system has no solution: {0}")]
    Inconsistent(String),
    #[error("linear system is under-determined: {0}")]
    Underdetermined(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("invalid color: {0}")]
    Color(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
