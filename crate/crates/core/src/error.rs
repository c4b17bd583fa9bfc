use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("orders {0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("expected a cubic form in 6 variables: {0}")]
    NotCubic(String),

    #[error("condition (*) fails at coordinate {index}")]
    StarViolated { index: usize },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("polynomial parse error: {0}")]
    Parse(String),

    #[error("chart {chart} out of range (stratum has {available} charts)")]
    ChartOutOfRange { chart: usize, available: usize },

    #[error("stratum carries no lines: {0}")]
    EmptyStratum(String),

    #[error("polynomial is not of pure character {expected}: {detail}")]
    MixedCharacter { expected: u64, detail: String },

    #[error("results at primes {q1} and {q2} disagree: {detail}")]
    NotCertified { q1: u32, q2: u32, detail: String },

    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,

    #[error("unknown family: {0}")]
    UnknownFamily(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
