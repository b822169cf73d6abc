use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a closed-form expression.
    #[error("{what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    /// A configuration value violates a precondition. `key` names the
    /// offending setting.
    #[error("{key}: {msg}")]
    Config { key: String, msg: String },

    /// An operation was requested in a state where it is undefined, e.g.
    /// evaluating a characteristic solution after its lifespan.
    #[error("{0}")]
    State(String),

    /// A theorem hypothesis required by the computation does not hold.
    #[error("{0}")]
    Hypothesis(String),

    /// A numerical procedure failed where it is guaranteed to succeed.
    #[error("{0}")]
    Internal(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown key `{key}`{}", suggestion.as_ref().map(|s| format!(" (did you mean `{s}`?)")).unwrap_or_default())]
    UnknownKey {
        key: String,
        suggestion: Option<String>,
    },

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            msg: msg.into(),
        }
    }

    /// Short machine-parsable category, used by the CLI on stderr.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Config { .. } => "config",
            Error::State(_) => "state",
            Error::Hypothesis(_) => "hypothesis",
            Error::Internal(_) => "internal",
            Error::Parse { .. } => "parse",
            Error::UnknownKey { .. } => "unknown-key",
            Error::Io(_) => "io",
        }
    }
}
