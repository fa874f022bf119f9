use thiserror::Error;

/// Errors produced by every module of the toolkit.
///
/// Each variant renders as a single line so that the command-line front end
/// can forward it verbatim to the error stream.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Not enough samples, extrema or history to produce a result.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Malformed input text; `line` is 1-based and counts the header.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A quote or sample violates an ordering or positivity invariant.
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A time period contains no quotes.
    #[error("empty period: {0}")]
    EmptyPeriod(String),

    /// A collection that must be non-empty is empty.
    #[error("empty input: {0}")]
    Empty(String),

    /// Configuration key or value could not be understood.
    #[error("config error: {0}")]
    Config(String),

    /// Parameter space has no feasible point.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A game action that the rules forbid in the current state.
    #[error("illegal action: {0}")]
    Illegal(String),

    /// A seat acted when it was not its turn.
    #[error("out of turn: seat {seat} acted, seat {expected} to act")]
    OutOfTurn { seat: usize, expected: usize },

    /// Search exceeded its node budget.
    #[error("state too large: {0}")]
    StateTooLarge(String),

    /// Optimistic-concurrency check failed.
    #[error("stale sequence: expected {expected}, got {got}")]
    StaleSeq { expected: u64, got: u64 },

    /// No session with the given id exists.
    #[error("unknown session: {0}")]
    UnknownSession(String),

    /// Filesystem failure.
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable kind tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::InsufficientData(_) => "insufficient-data",
            Error::Parse { .. } => "parse",
            Error::InvalidData(_) => "invalid-data",
            Error::EmptyPeriod(_) => "empty-period",
            Error::Empty(_) => "empty",
            Error::Config(_) => "config",
            Error::Infeasible(_) => "infeasible",
            Error::Illegal(_) => "illegal-action",
            Error::OutOfTurn { .. } => "out-of-turn",
            Error::StateTooLarge(_) => "state-too-large",
            Error::StaleSeq { .. } => "stale-seq",
            Error::UnknownSession(_) => "unknown-session",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
