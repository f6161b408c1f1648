//! Run manifests: enough to re-run a command and check its output.

use std::ffi::OsString;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Arguments after the program name, without `--manifest`.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_time_ms: u128,
    /// Hex SHA-256 of the bytes written to stdout.
    pub output_sha256: String,
}

impl RunManifest {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).map_err(CliError::Io)
    }
}

pub fn digest(output: &str) -> String {
    format!("{:x}", Sha256::digest(output.as_bytes()))
}

/// Drops the program name and any `--manifest PATH` / `--manifest=PATH`.
pub fn replayable_args(argv: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut iter = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned());
    while let Some(arg) = iter.next() {
        if arg == "--manifest" {
            iter.next();
        } else if !arg.starts_with("--manifest=") {
            out.push(arg);
        }
    }
    out
}
