//! Figure-data emission: one file per panel followed by a checksummed manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_NAME: &str = "manifest.json";

/// A named output file and its full contents.
#[derive(Debug, Clone)]
pub struct Panel {
    pub name: String,
    pub contents: String,
}

impl Panel {
    pub fn new(name: impl Into<String>, contents: impl Into<String>) -> Self {
        Self { name: name.into(), contents: contents.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub experiment: String,
    pub inputs: serde_json::Value,
    pub files: Vec<FileEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub environment: Option<serde_json::Value>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Writes every panel into `dir`, then `manifest.json`.
///
/// The manifest goes through a temporary file and a rename, so a manifest on
/// disk always lists a complete set of files.
pub fn emit_figure_data(
    dir: &Path,
    experiment: &str,
    inputs: serde_json::Value,
    panels: &[Panel],
    environment: Option<serde_json::Value>,
) -> CliResult<Manifest> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::with_capacity(panels.len());
    for panel in panels {
        if panel.name == MANIFEST_NAME || panel.name.contains(['/', '\\']) {
            return Err(CliError::Usage(format!("invalid panel file name `{}`", panel.name)));
        }
        write(&dir.join(&panel.name), panel.contents.as_bytes())?;
        files.push(FileEntry { name: panel.name.clone(), sha256: sha256_hex(panel.contents.as_bytes()) });
    }
    let manifest = Manifest { schema_version: SCHEMA_VERSION, experiment: experiment.to_owned(), inputs, files, environment };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    let tmp: PathBuf = dir.join(format!(".{MANIFEST_NAME}.tmp"));
    write(&tmp, text.as_bytes())?;
    let target = dir.join(MANIFEST_NAME);
    fs::rename(&tmp, &target).map_err(|e| CliError::io(&target, e))?;
    Ok(manifest)
}
