//! JSON result cache keyed by (d, r, mode, kind), with a schema version
//! and an embedded checksum.

use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const CACHE_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Key {
    pub d: u32,
    pub r: usize,
    pub symmetric: bool,
    pub kind: String,
}

impl Key {
    fn file_name(&self) -> String {
        let mode = if self.symmetric { "symmetric" } else { "hermitian" };
        let id = format!("{}:{}:{}:{}", self.kind, mode, self.d, self.r);
        format!("{}.json", hex::encode(Sha256::digest(id.as_bytes())))
    }
}

fn checksum(payload: &Value) -> String {
    hex::encode(Sha256::digest(payload.to_string().as_bytes()))
}

pub struct Cache {
    dir: PathBuf,
    version: u64,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into(), version: CACHE_VERSION }
    }

    #[cfg(test)]
    pub fn with_version(dir: impl Into<PathBuf>, version: u64) -> Self {
        Cache { dir: dir.into(), version }
    }

    fn path(&self, key: &Key) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// The stored payload, if present, of the current version and intact.
    pub fn get(&self, key: &Key) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: Value = serde_json::from_str(&text).ok()?;
        if entry["version"].as_u64() != Some(self.version) {
            return None;
        }
        let payload = entry.get("payload")?.clone();
        (entry["checksum"].as_str() == Some(checksum(&payload).as_str())).then_some(payload)
    }

    pub fn put(&self, key: &Key, payload: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = json!({
            "version": self.version,
            "checksum": checksum(payload),
            "payload": payload,
        });
        let tmp = self.path(key).with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(tmp, self.path(key))
    }

    /// Cached payload or the result of `compute`, which is then stored.
    pub fn get_or<E>(&self, key: &Key, compute: impl FnOnce() -> Result<Value, E>) -> Result<Value, E> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        // a failed write only costs a recomputation later
        let _ = self.put(key, &v);
        Ok(v)
    }
}
