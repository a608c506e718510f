use thiserror::Error;

use crate::field::FieldSpec;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("unknown field token `{0}`")]
    UnknownField(String),
    #[error("code {1} is not an element of {0}")]
    BadEncoding(FieldSpec, u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} requires a finite field")]
    InfiniteField(&'static str),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("classification failed: {0}")]
    Classify(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
