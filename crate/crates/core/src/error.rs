use thiserror::Error;

/// Errors raised by the hologram solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid channel: l = {l}, j = {j}")]
    InvalidChannel { l: u32, j: f64 },

    #[error("r = {r} fm lies outside the tabulated range [{lo}, {hi}] fm")]
    OutOfTableRange { r: f64, lo: f64, hi: f64 },

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("step budget of {max_steps} exhausted at t = {t}")]
    MaxStepsExceeded { t: f64, max_steps: usize },

    #[error("ill-conditioned matching radii R1 = {r1} fm, R2 = {r2} fm")]
    IllConditionedRadii { r1: f64, r2: f64 },

    #[error("no interior minimum of the final amplitude in [{lo}, {hi}]")]
    NoInteriorMinimum { lo: f64, hi: f64 },

    #[error("channel (l = {l}, j = {j}): {source}")]
    Channel {
        l: u32,
        j: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{} channel(s) failed: {}", .0.len(), .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Aggregate(Vec<Error>),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// True when the error originates from the integrator or another numerical failure
    /// rather than from invalid input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::StepSizeUnderflow { .. }
            | Error::NonFinite { .. }
            | Error::MaxStepsExceeded { .. }
            | Error::IllConditionedRadii { .. }
            | Error::NoInteriorMinimum { .. } => true,
            Error::Channel { source, .. } => source.is_numerical(),
            Error::Aggregate(errs) => errs.iter().any(Error::is_numerical),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
