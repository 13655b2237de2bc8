use serde::Serialize;

/// A failure surfaced to the command line as a structured object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{kind}: {message}")]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        CliError { kind: kind.into(), message: message.into() }
    }
}

impl From<quadtame::Error> for CliError {
    fn from(e: quadtame::Error) -> Self {
        CliError { kind: e.kind().into(), message: e.to_string() }
    }
}
