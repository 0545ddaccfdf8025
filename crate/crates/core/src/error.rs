use std::io;

use thiserror::Error;

/// Errors raised by the verification library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cyclotomic value is not rational: {0}")]
    NotRational(String),
    #[error("weight k must be positive")]
    InvalidWeight,
    #[error("ideal is not coprime to the level modulus {modulus}")]
    NotCoprime { modulus: u64 },
    #[error("zero element has no ideal factorization")]
    ZeroElement,
    #[error("integrality hypothesis violated at class {class}")]
    HypothesisViolated { class: u64 },
    #[error("value {0} is not p-integral")]
    NotIntegral(String),
    #[error("p-exponent a = {a} is too shallow (need a >= 2)")]
    LevelTooShallow { a: u32 },
    #[error("incompatible levels: {0}")]
    IncompatibleLevels(String),
    #[error("locally constant function fails flag check: {0}")]
    FlagViolation(String),
    #[error("function is not even")]
    NotEven,
    #[error("kernel subgroup is not abelian")]
    NotAbelianKernel,
    #[error("element is not fixed by the Sigma-action")]
    NotFixed,
    #[error("input data is not Sigma-equivariant: {0}")]
    EquivarianceViolated(String),
    #[error("bad conjugation data: {0}")]
    BadConjugationData(String),
    #[error("trace bound {have} does not cover required bound {need}")]
    InsufficientTraceBound { have: u64, need: u64 },
    #[error("truncation bound {have} does not cover required bound {need}")]
    InsufficientBound { have: u64, need: u64 },
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("invalid field data: {0}")]
    InvalidField(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
