use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("frequency {freq} out of range 0..{limit}")]
    FrequencyOutOfRange { freq: usize, limit: usize },

    #[error("duplicate frequency {0}")]
    DuplicateFrequency(usize),

    #[error("enumeration cap exceeded: {what} = {value} > {cap}")]
    CapExceeded { what: &'static str, value: u128, cap: u128 },

    #[error("operation requires a real ensemble")]
    RequiresRealEnsemble,

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("degenerate certificate: null vectors are parallel")]
    DegenerateCertificate,

    #[error("no solution with at most {0} nonzeros")]
    NoSolution(usize),

    #[error("autocorrelation has negative zero lag ({0})")]
    NegativeEnergy(f64),

    #[error("recovered autocorrelation is not centro-symmetric (max deviation {0:e})")]
    NotCentroSymmetric(f64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
