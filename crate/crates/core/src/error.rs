use thiserror::Error;

/// Errors raised by the algebra, representation and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator {denominator} vanishes at u = {at}")]
    Pole { denominator: String, at: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid highest weight: {0}")]
    InvalidWeight(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("negative radicand {value:e} in {context}")]
    NegativeRadicand { value: f64, context: String },
    #[error("rewrite rule applied to an ordered pair {0}")]
    AlreadyOrdered(String),
}

pub type Result<T> = std::result::Result<T, Error>;
