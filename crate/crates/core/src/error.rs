use thiserror::Error;

/// Everything that can go wrong inside the engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a series with zero constant term")]
    NonUnitDivisor,
    #[error("truncation mismatch: {left} vs {right}")]
    TruncMismatch { left: u32, right: u32 },
    #[error("logarithm needs constant term 1")]
    NonUnitLog,
    #[error("exponential needs zero constant term")]
    NonNilpotentExp,
    #[error("numeric evaluation needs |q| < 1, got |q| = {0}")]
    DivergentEvaluation(f64),
    #[error("factor series must be even for Pontryagin classes (odd coefficient at y^{0})")]
    ParityError(usize),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("dimension error: {0}")]
    DimensionError(String),
    #[error("inconsistent data: {0}")]
    InconsistentData(String),
    #[error("unknown manifold `{0}`")]
    UnknownManifold(String),
    #[error("modular fit failed: {0}")]
    FitError(String),
    #[error("tau_im = {0} is too close to the fixed point of tau -> -1/tau (need tau_im > 1)")]
    ConvergenceRisk(f64),
    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),
    #[error("exponent domain error: mu(p-1) - p = {0} must be positive")]
    ExponentDomainError(f64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("graph has {vertices} vertices, above the cap of {cap}")]
    TooLarge { vertices: u128, cap: u64 },
    #[error("catalog parse error at line {line}, column {column}: {message}")]
    CatalogParse { line: usize, column: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
