//! Content-addressed store of finished jobs, one JSON file per key.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ENV_DIR: &str = "ETAZETA_CACHE_DIR";

#[derive(Debug, Serialize, Deserialize)]
pub struct JobRecord {
    pub command: String,
    pub spec: Value,
    pub payload: Value,
    pub created: u64,
    pub version: String,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Self { dir }
    }

    /// `$ETAZETA_CACHE_DIR`, else `$HOME/.cache/etazeta`.
    pub fn from_env() -> Option<Self> {
        if let Some(dir) = std::env::var_os(ENV_DIR) {
            return Some(Self::new(dir.into()));
        }
        std::env::var_os("HOME").map(|h| Self::new(Path::new(&h).join(".cache").join("etazeta")))
    }

    /// Key over the command, its canonical spec and the crate version.
    pub fn key(command: &str, spec: &Value) -> String {
        let canonical = serde_json::json!({
            "command": command,
            "spec": spec,
            "version": env!("CARGO_PKG_VERSION"),
        });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, command: &str, spec: &Value) -> Option<Value> {
        let text = fs::read_to_string(self.path(&Self::key(command, spec))).ok()?;
        let record: JobRecord = serde_json::from_str(&text).ok()?;
        (record.command == command && &record.spec == spec).then_some(record.payload)
    }

    /// Writes through a temporary file in the same directory, then renames.
    pub fn put(&self, command: &str, spec: &Value, payload: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let record = JobRecord {
            command: command.to_string(),
            spec: spec.clone(),
            payload: payload.clone(),
            created: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            version: env!("CARGO_PKG_VERSION").to_string(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string_pretty(&record)?.as_bytes())?;
        tmp.persist(self.path(&Self::key(command, spec))).map_err(|e| e.error)?;
        Ok(())
    }
}

/// Atomic write of `contents` to `path`.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
