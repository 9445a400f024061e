//! Batch commands behind the `formicode` binary.
//!
//! Each `cmd_*` function is a plain library call returning either an outcome
//! or a [`CliError`] carrying the process exit code, so the binary stays a
//! thin argument parser.

mod commands;
mod config;
mod replicate;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub use commands::{
    cmd_export, cmd_fit, cmd_plotdata, cmd_replicate, cmd_simulate, summarize, FitOutcome,
    FitSource, PlotKind, PlotSource, Series, SimulateArgs, SimulateOutcome, StageSummary,
};
pub use config::{
    config_hash, load_config, parse_config, CodingSpec, ConfigFile, GoalSpec, Probability,
    StageSpec, TimeModelSpec, SCHEMA_VERSION,
};
pub use replicate::{replicate, ReplicationCheck, ReplicationReport, SELECTORS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Seed used when neither the flag, the config nor the environment sets one.
pub const DEFAULT_SEED: u64 = 0;
pub const SEED_ENV_VAR: &str = "FORMICODE_SEED";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        let code = match e {
            crate::Error::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Audit record written as `manifest.json` next to a command's outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 of the canonical JSON of the command's inputs.
    pub config_hash: String,
    pub seed: u64,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, inputs: &serde_json::Value, seed: u64, outputs: Vec<String>) -> Self {
        RunManifest {
            command: command.to_string(),
            config_hash: canonical_hash(inputs),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs,
        }
    }
}

/// Hex SHA-256 of compact JSON with object keys in sorted order.
pub fn canonical_hash(value: &serde_json::Value) -> String {
    // serde_json's default map is ordered by key, so this is canonical.
    let text = serde_json::to_string(value).expect("JSON values always serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Seed precedence: explicit flag, then config file, then the environment.
pub fn resolve_seed(
    flag: Option<u64>,
    config: Option<u64>,
    env: Option<&str>,
) -> Result<u64, CliError> {
    if let Some(s) = flag.or(config) {
        return Ok(s);
    }
    match env {
        Some(text) => text.trim().parse().map_err(|_| {
            CliError::usage(format!(
                "{SEED_ENV_VAR}={text:?} is not an unsigned 64-bit integer"
            ))
        }),
        None => Ok(DEFAULT_SEED),
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text.into_bytes()
}

fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<PathBuf, CliError> {
    write_file(dir, "manifest.json", &to_json_bytes(manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(1), Some(2), Some("3")).unwrap(), 1);
        assert_eq!(resolve_seed(None, Some(2), Some("3")).unwrap(), 2);
        assert_eq!(resolve_seed(None, None, Some(" 3 ")).unwrap(), 3);
        assert_eq!(resolve_seed(None, None, None).unwrap(), DEFAULT_SEED);
        assert_eq!(
            resolve_seed(None, None, Some("x")).unwrap_err().code,
            EXIT_USAGE
        );
    }

    #[test]
    fn hash_ignores_key_order() {
        let a: serde_json::Value = serde_json::from_str(r#"{"b":1,"a":[1,2]}"#).unwrap();
        let b: serde_json::Value = serde_json::from_str(r#"{ "a": [1, 2], "b": 1 }"#).unwrap();
        assert_eq!(canonical_hash(&a), canonical_hash(&b));
        let c: serde_json::Value = serde_json::from_str(r#"{"a":[2,1],"b":1}"#).unwrap();
        assert_ne!(canonical_hash(&a), canonical_hash(&c));
        assert_eq!(canonical_hash(&a).len(), 64);
    }

    #[test]
    fn error_codes() {
        let io: CliError = crate::Error::Io(std::io::Error::other("disk")).into();
        assert_eq!(io.code, EXIT_IO);
        let cfg: CliError = crate::Error::InvalidConfig("stage 2: bad".into()).into();
        assert_eq!(cfg.code, EXIT_USAGE);
    }
}
