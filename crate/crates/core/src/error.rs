use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A function produced a non-finite value.
    #[error("evaluation error at {at}: {message}")]
    Evaluation { at: String, message: String },

    /// An argument lies outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition on the request was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A kernel was evaluated on or next to one of its poles.
    #[error("pole of the {kernel} kernel at t = {location}")]
    Pole { kernel: String, location: String },

    /// The requested operation is not available for this input.
    #[error("not supported: {0}")]
    Capability(String),

    /// No catalog transform pair matched the expression.
    #[error("no transform pair matches `{expr}`; try the telescope or oracle methods")]
    Recognition { expr: String },

    #[error("syntax error at byte {offset}: expected one of {}", expected.join(", "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
    },
}

impl Error {
    pub(crate) fn eval_at(at: impl std::fmt::Display, message: impl Into<String>) -> Self {
        Error::Evaluation {
            at: at.to_string(),
            message: message.into(),
        }
    }
}
