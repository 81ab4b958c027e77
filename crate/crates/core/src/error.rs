use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("invalid degree: {0}")]
    BadDegree(String),
    #[error("field of order {p}^{degree} exceeds the table limit")]
    FieldTooLarge { p: u64, degree: u32 },
    #[error("element is not in the subfield of degree {0}")]
    WrongLayer(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("residue {0} is congruent to p modulo p+1")]
    BracketUndefined(i64),
    #[error("incompatible characters: {0}")]
    IncompatibleCharacters(String),
    #[error("q = {q} exceeds the enumeration bound {bound}")]
    BoundExceeded { q: u64, bound: u64 },
    #[error("function is not bi-invariant")]
    NotBiInvariant,
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("operation requires a prime residue field (f = 1)")]
    NeedsPrimeField,
    #[error("parameters live in different groups: {0}")]
    CrossGroup(String),
    #[error("restriction is not diagonal")]
    NotDiagonal,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
