use std::fmt::Display;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad config or arguments; exit code 2.
    #[error("invalid input: {field}: {message}")]
    Input { field: String, message: String },
    #[error("io error: {path}: {message}")]
    Io { path: String, message: String },
    /// One or more verification checks failed; exit code 1.
    #[error("verification failed: {0} check(s) did not pass")]
    Verification(usize),
}

impl CliError {
    pub fn input(field: impl Into<String>, message: impl Display) -> Self {
        CliError::Input {
            field: field.into(),
            message: single_line(&message.to_string()),
        }
    }

    pub fn io(path: impl Into<String>, err: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            message: single_line(&err.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input { .. } | CliError::Io { .. } => 2,
        }
    }
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
