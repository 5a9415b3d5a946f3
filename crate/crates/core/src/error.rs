use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("state {revealed:?} is not a prefix of instance {days:?}")]
    StateMismatch { revealed: Vec<u32>, days: Vec<u32> },

    #[error("threshold {0} is not an integer; use the adversary search instead")]
    NonIntegerThreshold(f64),

    #[error("degenerate threshold {threshold} (last revealed day {last_revealed})")]
    DegenerateThreshold { threshold: f64, last_revealed: u32 },

    #[error("negative probability mass {mass:e} at day {day}")]
    NegativeMass { day: u32, mass: f64 },

    #[error("search space of {required} evaluations exceeds the node budget {budget}")]
    SearchSpaceTooLarge { required: u128, budget: u64 },

    #[error("elimination condition violated: {0}")]
    ConditionViolated(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
