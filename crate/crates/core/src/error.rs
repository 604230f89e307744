use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input")]
    NonFinite,
    #[error("gamma pole at {0}")]
    GammaPole(String),
    #[error("invalid parameter: {0}")]
    Domain(String),
    #[error("exponent window: |sigma| = {0} exceeds 2")]
    ExponentWindow(f64),
    #[error("memory budget exceeded: {what} needs {bytes} bytes (limit {limit})")]
    Budget { what: String, bytes: u64, limit: u64 },
    #[error("asymptotic regime requires t >= 10, got t = {0}")]
    AsymptoticRegime(f64),
    #[error("validity window: {0}")]
    ValidityWindow(String),
    #[error("empty sum: {0}")]
    EmptySum(String),
    #[error("pole of zeta at s = 1")]
    ZetaPole,
    #[error("ratio bound requires x < t (x = {x}, t = {t})")]
    CRatio { x: f64, t: f64 },
    #[error("box must satisfy n>m identically; triangle-overlapping boxes unsupported")]
    BoxOverlap,
    #[error("need at least 5 usable points for a fit, have {0}")]
    TooFewPoints(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
