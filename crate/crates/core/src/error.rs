use thiserror::Error;

/// Errors produced by the evaluators, the simulator and the CLI glue.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters (n = {n}, s = {s}): {reason}")]
    InvalidParams { n: u32, s: u32, reason: String },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error(
        "binomial coefficient C({n}, {k}) exceeds the integer table (n <= 64); use exact mode"
    )]
    BinomialOverflow { n: u64, k: u64 },

    #[error("alternating sum lost too many digits: estimated relative error {relative_error:e} exceeds {tolerance:e}")]
    Cancellation { relative_error: f64, tolerance: f64 },

    #[error("method `{method}` cannot evaluate {quantity}")]
    UnsupportedMethod {
        method: &'static str,
        quantity: &'static str,
    },

    #[error("degenerate transition row {state}: leaving probability is not positive")]
    DegenerateTransition { state: usize },

    #[error("game did not finish within {max_turns} turns")]
    NonTermination { max_turns: u64 },

    #[error("roll source exhausted after {rolls} rolls")]
    RollSourceExhausted { rolls: usize },

    #[error("roll {value} is outside 1..={faces}")]
    RollOutOfRange { value: u32, faces: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid_argument(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}
