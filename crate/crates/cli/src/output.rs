//! Deterministic file emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// CSV text: `#` comment lines, a column header, then rows.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(comments: &[&str], columns: &[&str]) -> Self {
        let mut text = String::new();
        for c in comments {
            writeln!(text, "# {c}").unwrap();
        }
        writeln!(text, "{}", columns.join(",")).unwrap();
        Csv { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        writeln!(self.text, "{}", cells.join(",")).unwrap();
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Shortest round-trip representation, so reruns are byte-identical. Negative zero prints as 0.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:e}")
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<PathBuf> {
    let mut text = serde_json::to_string_pretty(value).expect("serialisable report");
    text.push('\n');
    write(dir, name, &text)
}
