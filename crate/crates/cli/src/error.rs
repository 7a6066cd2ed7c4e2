use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_UNDECIDED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or unreadable input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input that violates a precondition.
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("invalid input: {0}")]
    Core(#[from] povmkit::Error),
    #[error("i/o error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Invalid(_) | CliError::Core(_) => EXIT_INVALID,
            // a failed write is reported like unreadable input
            CliError::Output(_) => EXIT_PARSE,
        }
    }
}
