//! On-disk result cache keyed by command and canonical arguments.
//!
//! Each entry is one JSON file named by the SHA-256 of its key. Files are
//! written to a temporary sibling and renamed into place, so readers only
//! ever see complete entries. Entries with another schema version or a
//! payload that does not match its hash are ignored.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "ECONE_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".econe-cache";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub key: String,
    pub payload: Value,
    /// Hex SHA-256 of the compact JSON encoding of `payload`.
    pub hash: String,
}

pub fn sha256_hex(data: &str) -> String {
    hex::encode(Sha256::digest(data.as_bytes()))
}

/// `command` followed by the compact JSON of `args`.
pub fn canonical_key(command: &str, args: &impl Serialize) -> Result<String, CliError> {
    Ok(format!("{command} {}", serde_json::to_string(args)?))
}

impl CacheEntry {
    pub fn new(key: String, payload: Value) -> Result<Self, CliError> {
        let hash = sha256_hex(&serde_json::to_string(&payload)?);
        Ok(Self { schema_version: SCHEMA_VERSION, key, payload, hash })
    }

    pub fn is_valid_for(&self, key: &str) -> bool {
        self.schema_version == SCHEMA_VERSION
            && self.key == key
            && serde_json::to_string(&self.payload).is_ok_and(|s| sha256_hex(&s) == self.hash)
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Explicit directory, else `$ECONE_CACHE_DIR`, else `.econe-cache`.
    pub fn locate(explicit: Option<&Path>) -> Self {
        let dir = explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        Self::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", sha256_hex(key)))
    }

    pub fn get(&self, key: &str) -> Option<Value> {
        let text = fs::read_to_string(self.path_for(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        entry.is_valid_for(key).then_some(entry.payload)
    }

    pub fn put(&self, key: &str, payload: Value) -> Result<(), CliError> {
        let entry = CacheEntry::new(key.to_string(), payload)?;
        write_atomic(&self.path_for(key), serde_json::to_string(&entry)?.as_bytes())
    }

    /// Cached payload for `key`, computing and storing it on a miss. Returns the value and whether it was a hit.
    pub fn get_or_compute<T, F>(&self, key: &str, compute: F) -> Result<(T, bool), CliError>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T, CliError>,
    {
        if let Some(value) = self.get(key) {
            if let Ok(t) = serde_json::from_value(value) {
                return Ok((t, true));
            }
        }
        let t = compute()?;
        self.put(key, serde_json::to_value(&t)?)?;
        Ok((t, false))
    }
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
