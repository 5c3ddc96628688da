use thiserror::Error;

/// Errors raised by the library. Variants map onto the failure classes the
/// command-line front end distinguishes (input validation versus failed
/// scientific contracts).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid interval: lo = {lo}, hi = {hi}")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("divergent tail")]
    DivergentTail,
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("undersampled phase")]
    UndersampledPhase,
    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("root finding did not converge")]
    NoConvergence,
    #[error("central charge must be positive")]
    NonPositiveCentralCharge,
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("resolution too low: {0}")]
    ResolutionTooLow(String),
    #[error("not a reparametrisation: {0}")]
    NotReparametrisation(String),
    #[error("point at infinity")]
    PointAtInfinity,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("support overlap: {0}")]
    SupportOverlap(String),
    #[error("tail mismatch: {0}")]
    TailMismatch(String),
    #[error("bound violated: margin {margin}")]
    BoundViolated { margin: f64 },
    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),
    #[error("asymptotically null curve: {0}")]
    AsymptoticallyNull(String),
    #[error("unsupported parametrisation: {0}")]
    UnsupportedParametrisation(String),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("negative null average: {0}")]
    NegativeNullAverage(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("not unitary: {0}")]
    NotUnitary(String),
    #[error("mode out of range: {0}")]
    ModeOutOfRange(String),
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a scientific contract (as opposed to malformed input).
    pub fn is_contract_failure(&self) -> bool {
        matches!(
            self,
            Error::BoundViolated { .. }
                | Error::CrossCheckFailed(_)
                | Error::NotUnitary(_)
                | Error::TailMismatch(_)
                | Error::NoConvergence
                | Error::ResolutionTooLow(_)
                | Error::UndersampledPhase
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
