use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("character is not completely multiplicative: chi({a}*{b}) != chi({a})*chi({b})")]
    NonMultiplicative { a: u64, b: u64 },
    #[error("character has wrong support at residue {residue} (mod {modulus})")]
    WrongSupport { residue: u64, modulus: u64 },
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("invalid product specification: {0}")]
    InvalidSpec(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime cutoff {0} is below 2")]
    CutoffTooSmall(u64),
    #[error("mode unavailable: {0}")]
    ModeUnavailable(String),
    #[error("L-value requested for a principal character")]
    PrincipalCharacter,
    #[error("precision {target:e} unreachable within {cap} terms")]
    PrecisionUnreachable { target: f64, cap: u64 },
    #[error("table size {n} exceeds the configured cap {cap}")]
    OutOfMemory { n: u64, cap: u64 },
    #[error("x = {x} lies beyond the table (N = {n})")]
    XBeyondTable { x: f64, n: u64 },
    #[error("truncation M = {m} exceeds the table (N = {n})")]
    MBeyondTable { m: u64, n: u64 },
    #[error("truncation M = {m} is smaller than x = {x}")]
    MSmallerThanX { m: u64, x: f64 },
    #[error("s = {0} is outside the half-plane of absolute convergence (s > 2)")]
    SOutOfRange(f64),
    #[error("x must be positive for this route")]
    NonPositiveX,
    #[error("x = {x} is below n = {n}")]
    XBelowN { x: f64, n: u64 },
    #[error("x = {0} is below 1")]
    XBelowOne(f64),
    #[error("x = {0} is negative")]
    NegativeX(f64),
    #[error("grid function is not O(t) near zero")]
    NotIntegrableNearZero,
    #[error("x = {x} lies beyond the grid end {end}")]
    XBeyondGrid { x: f64, end: f64 },
    #[error("anchor {0} lies outside (0, X]")]
    AnchorOutOfRange(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("function does not satisfy the homogeneous equation (residual {0:e})")]
    NotHomogeneous(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("cache mismatch: {0}")]
    Cache(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the error's class. 0 and 1 are reserved for
    /// success and failed verification.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Usage(_) | Parse(_) | Json(_) => 2,
            BadModulus(_)
            | NonMultiplicative { .. }
            | WrongSupport { .. }
            | InvalidCharacter(_)
            | InvalidSpec(_)
            | NotPrime(_) => 3,
            CutoffTooSmall(_)
            | XBeyondTable { .. }
            | MBeyondTable { .. }
            | MSmallerThanX { .. }
            | SOutOfRange(_)
            | NonPositiveX
            | XBelowN { .. }
            | XBelowOne(_)
            | NegativeX(_)
            | XBeyondGrid { .. }
            | AnchorOutOfRange(_)
            | InvalidGrid(_)
            | InvalidArgument(_) => 4,
            PrincipalCharacter
            | PrecisionUnreachable { .. }
            | NotIntegrableNearZero
            | NotHomogeneous(_) => 5,
            ModeUnavailable(_) | OutOfMemory { .. } => 6,
            Io(_) | Cache(_) => 7,
        }
    }
}
