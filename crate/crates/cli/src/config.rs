//! Strict TOML run configs. Every field mirrors a command-line flag; flags win.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

pub fn load<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

/// Resolves a path read from a config file against the file's directory.
pub fn relative_to(config: &Path, p: PathBuf) -> PathBuf {
    if p.is_relative() {
        config.parent().map(|d| d.join(&p)).unwrap_or(p)
    } else {
        p
    }
}

pub fn require<T>(value: Option<T>, field: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::missing(field))
}

pub fn positive(value: f64, field: &str) -> CliResult<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::config(format!("`{field}` must be positive, got {value}")))
    }
}

pub fn finite(value: f64, field: &str) -> CliResult<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::config(format!("`{field}` must be finite, got {value}")))
    }
}

/// Fills every `None` field of `$flags` from `$file`.
macro_rules! merge_fields {
    ($flags:expr, $file:expr, [$($field:ident),* $(,)?]) => {
        $( if $flags.$field.is_none() { $flags.$field = $file.$field; } )*
    };
}
pub(crate) use merge_fields;
