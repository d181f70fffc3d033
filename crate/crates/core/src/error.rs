use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-unit leading term: {0}")]
    NonUnit(String),
    #[error("series is zero up to truncation order {0}")]
    ZeroSeries(String),
    #[error("precision required: {0}")]
    NeedsPrecision(String),
    #[error("no root available: {0}")]
    NoRoot(String),
    #[error("singular matrix: determinant vanishes to order {0}")]
    Singular(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid chart: {0}")]
    Chart(String),
    #[error("non-semisimple direction: {0}")]
    NonSemisimple(String),
    #[error("no suitable probe field: {0}")]
    NoProbe(String),
    #[error("structure: {0}")]
    Structure(String),
    #[error("genus-one extendability fails: {0}")]
    Extendability(String),
    #[error("integration: {0}")]
    Integration(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("insufficient truncation: {0}")]
    Truncation(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
