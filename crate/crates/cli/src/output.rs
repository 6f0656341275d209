use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

/// Files produced by one command. Nothing touches the output directory
/// until every file has been rendered, and each file is moved into place
/// by rename.
pub struct Staged {
    dir: PathBuf,
    header: String,
    files: Vec<(String, Vec<u8>)>,
}

impl Staged {
    pub fn new(dir: &Path, command: &str, config_hash: &str) -> Self {
        Self {
            dir: dir.to_path_buf(),
            header: format!(
                "# cii {command} {} config-sha256={config_hash}\n",
                env!("CARGO_PKG_VERSION")
            ),
            files: Vec::new(),
        }
    }

    /// Adds a CSV file, prefixed with the provenance comment.
    pub fn csv<F>(&mut self, name: &str, render: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> cii_core::Result<()>,
    {
        let mut buf = self.header.clone().into_bytes();
        render(&mut buf).with_context(|| format!("rendering {name}"))?;
        self.files.push((name.to_string(), buf));
        Ok(())
    }

    /// Adds a JSON document; provenance goes in its `provenance` field.
    pub fn json(&mut self, name: &str, value: &serde_json::Value) -> Result<()> {
        let mut buf = serde_json::to_vec_pretty(value)?;
        buf.push(b'\n');
        self.files.push((name.to_string(), buf));
        Ok(())
    }

    pub fn commit(self) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating {}", self.dir.display()))?;
        let mut temps = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let mut tmp = NamedTempFile::new_in(&self.dir)
                .with_context(|| format!("creating temporary file in {}", self.dir.display()))?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            temps.push((self.dir.join(name), tmp));
        }
        let mut written = Vec::with_capacity(temps.len());
        for (path, tmp) in temps {
            tmp.persist(&path)
                .with_context(|| format!("moving output into {}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn provenance(command: &str, config_hash: &str) -> serde_json::Value {
    serde_json::json!({
        "tool": "cii",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config_sha256": config_hash,
    })
}
