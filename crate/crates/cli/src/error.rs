use std::fmt;

use hologram_core::Error;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_NO_MINIMUM: u8 = 4;

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { code: EXIT_CONFIG, message: message.into() }
    }

    pub fn missing(field: &str) -> Self {
        Self::config(format!("missing required field `{field}`"))
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self::config(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = if matches!(err, Error::NoInteriorMinimum { .. }) {
            EXIT_NO_MINIMUM
        } else if err.is_numerical() {
            EXIT_NUMERICAL
        } else {
            EXIT_CONFIG
        };
        CliError { code, message: err.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
