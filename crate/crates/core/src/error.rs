use thiserror::Error;

/// Errors produced by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("step size underflow (h = {h:e}) at t = {t}")]
    StepUnderflow { t: f64, h: f64, state: Vec<f64> },

    #[error("maximum number of integration steps ({0}) exceeded")]
    TooManySteps(usize),

    #[error("no admissible root: {0}")]
    NoRoot(String),

    #[error("point is not an equilibrium (residual {residual:e})")]
    NotAnEquilibrium { residual: f64 },

    #[error("degenerate point at x = {x}: trace and determinant both vanish (Bogdanov-Takens suspect)")]
    BogdanovTakensSuspect { x: f64, current: f64, gamma: f64 },

    #[error("time series too short: {len} samples, need at least {required}")]
    SeriesTooShort { len: usize, required: usize },

    #[error("horizon too short: {periods:.2} forcing periods, need at least {required}")]
    HorizonTooShort { periods: f64, required: f64 },

    #[error("need at least two spikes, found {0}")]
    TooFewSpikes(usize),

    #[error("parameter JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
