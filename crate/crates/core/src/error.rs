use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A structural parameter is outside the domain of the operation
    /// (cycle shorter than 3, torus side below 3, k where none exists, ...).
    #[error("invalid size: {0}")]
    InvalidSize(String),

    /// The request is well-formed but exceeds a configured budget.
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    Capacity {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    /// Brute-force enumeration would exceed the oracle work budget.
    #[error("oracle budget exceeded: {0}")]
    OracleBudget(String),

    /// Malformed input text (edge lists, env overrides).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Operation defined only for regular graphs.
    #[error("graph is not regular: {0}")]
    NotRegular(String),

    /// Operation defined only for degree >= 2.
    #[error("unsupported degree {0}: walks cannot avoid reversing on degree < 2")]
    UnsupportedDegree(usize),

    /// Caller passed an argument combination the operation does not support.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration struct fails its own invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Whether the error reflects a resource/capability limit rather than
    /// a malformed request. CLI maps these to a distinct exit code.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            Error::Capacity { .. }
                | Error::OracleBudget(_)
                | Error::NotRegular(_)
                | Error::UnsupportedDegree(_)
        )
    }
}
