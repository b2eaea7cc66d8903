use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {x} lies outside the convergence disk (radius {radius})")]
    OutOfDisk { x: f64, radius: f64 },

    #[error("series did not reach tolerance {tol} at x = {x} within {cap} terms")]
    NoConvergence { x: f64, tol: f64, cap: usize },

    #[error("eigenvalue iteration failed to converge")]
    EigenFailure,

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("floating-point overflow while {0}")]
    Overflow(&'static str),

    #[error("operators do not commute: commutator norm {commutator_norm:e} exceeds {threshold:e}")]
    NonCommuting { commutator_norm: f64, threshold: f64 },

    #[error("Hölder exponent must satisfy p > 1, got {0}")]
    BadExponent(f64),

    #[error("denominator vanishes")]
    DenominatorVanishes,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("unknown series `{0}`")]
    UnknownSeries(String),

    #[error("unknown instance family `{0}`")]
    UnknownFamily(String),

    #[error("family `{0}` cannot be used here")]
    WrongFamilyKind(String),

    #[error("failed to generate a commuting pair after {retries} retries")]
    GenerationFailure { retries: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
