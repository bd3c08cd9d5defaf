use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FILE_NAME: &str = "manifest.json";

/// Everything needed to re-run a command and check that it reproduces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Parsed options, for reading.
    pub options: serde_json::Value,
    /// Command-line arguments without the output directory, for replay.
    pub args: Vec<String>,
    pub input: Option<String>,
    pub input_digest: Option<String>,
    pub tool_version: String,
    pub master_seed: Option<u64>,
    /// sha256 of every file written, by file name.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects output files for one run and writes them with the manifest.
pub struct OutputSet {
    dir: PathBuf,
    outputs: BTreeMap<String, String>,
}

impl OutputSet {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            outputs: BTreeMap::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.outputs
            .insert(name.to_string(), sha256_hex(contents.as_bytes()));
        Ok(path)
    }

    pub fn finish(self, mut manifest: RunManifest) -> Result<RunManifest> {
        manifest.outputs = self.outputs;
        let text = serde_json::to_string_pretty(&manifest)?;
        let path = self.dir.join(FILE_NAME);
        fs::write(&path, text + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
        Ok(manifest)
    }
}

pub fn read(path: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(path).map_err(|source| crate::exit::Unreadable {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).with_context(|| format!("{} is not a run manifest", path.display()))
}

/// Drops `--out DIR` / `--out=DIR` from an argument list.
pub fn strip_out(args: &[String]) -> Vec<String> {
    let mut kept = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") {
            continue;
        }
        kept.push(a.clone());
    }
    kept
}
