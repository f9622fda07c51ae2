use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
struct FileRecord {
    path: String,
    sha256: String,
}

/// Everything needed to rerun a command and check its outputs.
#[derive(Debug, Serialize)]
pub struct Manifest {
    toolkit_version: &'static str,
    command: String,
    argv: Vec<String>,
    seed: u64,
    settings: serde_json::Value,
    inputs: Vec<FileRecord>,
    outputs: Vec<FileRecord>,
}

fn record(path: &Path) -> anyhow::Result<FileRecord> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FileRecord {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

impl Manifest {
    pub fn new(command: &str, argv: &[String], seed: u64, settings: serde_json::Value) -> Self {
        Manifest {
            toolkit_version: repeval_core::TOOLKIT_VERSION,
            command: command.to_string(),
            argv: argv.to_vec(),
            seed,
            settings,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> anyhow::Result<()> {
        self.inputs.push(record(path)?);
        Ok(())
    }

    pub fn output(&mut self, path: &Path) -> anyhow::Result<()> {
        self.outputs.push(record(path)?);
        Ok(())
    }

    pub fn write(&self, dir: &Path, command: &str) -> anyhow::Result<()> {
        let path = dir.join(format!("{command}.manifest.json"));
        let text = serde_json::to_string_pretty(self)? + "\n";
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}
