//! Command implementations behind the `dimer-coamoeba` binary.
//!
//! Every command returns a JSON value (written to a file or stdout by the
//! caller) and writes its figures itself. Output depends only on the inputs
//! and the [`RunConfig`].

use std::path::Path;

use serde_json::Value;
use thiserror::Error;

pub mod commands;
pub mod config;
pub mod suite;

pub use config::RunConfig;
pub use dimer_coamoeba::{parse_poly, parse_poly_with};

/// Version stamped into every JSON report as `"schema"`.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] dimer_coamoeba::Error),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, CliError>;

pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const ACCEPTANCE_FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline; object keys come out sorted.
pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Wraps a report body with the schema version and command name.
pub fn envelope(command: &str, mut body: Value) -> Value {
    if let Value::Object(m) = &mut body {
        m.insert("schema".into(), REPORT_SCHEMA_VERSION.into());
        m.insert("command".into(), command.into());
    }
    body
}
