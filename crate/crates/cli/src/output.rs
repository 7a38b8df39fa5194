//! Output envelopes, provenance headers and error reporting.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Everything needed to reproduce a run. Output path and worker count are
/// left out on purpose: they do not affect the numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub core_version: String,
    pub command: String,
    pub seed: u64,
    pub config: Value,
}

impl Provenance {
    pub fn new(command: &str, seed: u64, config: Value) -> Self {
        Provenance {
            tool: "gasket".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            core_version: gasket::VERSION.into(),
            command: command.into(),
            seed,
            config,
        }
    }

    /// One line, usable as a CSV comment or inside an XML comment.
    pub fn summary(&self) -> String {
        format!(
            "{} {} (core {}) {} seed={} config={}",
            self.tool, self.version, self.core_version, self.command, self.seed, self.config
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub result: T,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    NonConvergence(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::NonConvergence(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::NonConvergence(_) => "nonConvergence",
            CliError::Io(_) => "io",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::NonConvergence(m) | CliError::Io(m) => m,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind(), "message": self.message(), "exitCode": self.exit_code() }
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}

impl From<gasket::Error> for CliError {
    fn from(e: gasket::Error) -> Self {
        if e.is_numerical() {
            CliError::NonConvergence(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

macro_rules! from_module_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                gasket::Error::from(e).into()
            }
        }
    )*};
}

from_module_error!(
    gasket::GasketError,
    gasket::MetricError,
    gasket::HarmonicError,
    gasket::SpectrumError,
    gasket::HilbertError,
    gasket::TransportError
);

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Rendered output in every format the command supports.
pub struct Rendered {
    pub json: Option<String>,
    pub csv: Option<String>,
    pub svg: Option<String>,
}

pub fn json_document<T: Serialize>(provenance: &Provenance, result: &T) -> Result<String, CliError> {
    let env = Envelope { schema_version: SCHEMA_VERSION, provenance: provenance.clone(), result };
    Ok(serde_json::to_string_pretty(&env)? + "\n")
}

pub fn csv_document(provenance: &Provenance, body: &str) -> String {
    format!("# schemaVersion: {SCHEMA_VERSION}\n# {}\n{body}", provenance.summary())
}

pub fn write_output(
    format: Format,
    out: &Option<PathBuf>,
    command: &str,
    rendered: Rendered,
) -> Result<(), CliError> {
    let text = match format {
        Format::Json => rendered.json,
        Format::Csv => rendered.csv,
        Format::Svg => rendered.svg,
    }
    .ok_or_else(|| CliError::Validation(format!("{command} does not support --format {format:?}").to_lowercase()))?;
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
