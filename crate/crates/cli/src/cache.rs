//! Content-addressed JSON cache for placement and grasp sets.

use std::path::{Path, PathBuf};

use pinregrasp::{Error, Result, SCHEMA_VERSION};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One cached payload; `key` and `version` are checked on every read.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEntry<T> {
    pub key: String,
    pub version: u32,
    pub payload: T,
}

/// A cache directory, or no caching at all.
#[derive(Debug, Clone, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

/// SHA-256 over a kind tag, the mesh hash and the JSON form of the parameters.
pub fn cache_key<P: Serialize>(kind: &str, mesh_hash: &str, params: &P) -> Result<String> {
    let mut h = Sha256::new();
    h.update(kind.as_bytes());
    h.update([0]);
    h.update(mesh_hash.as_bytes());
    h.update([0]);
    h.update(serde_json::to_vec(params)?);
    h.update(SCHEMA_VERSION.to_le_bytes());
    Ok(hex::encode(h.finalize()))
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Cache {
        Cache { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, kind: &str, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{kind}-{key}.json")))
    }

    /// Cached payload for `key`, if present and written by this schema
    /// version. Unreadable or mismatched entries count as misses.
    pub fn get<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        let bytes = std::fs::read(self.path(kind, key)?).ok()?;
        let entry: CacheEntry<T> = serde_json::from_slice(&bytes).ok()?;
        (entry.key == key && entry.version == SCHEMA_VERSION).then_some(entry.payload)
    }

    pub fn put<T: Serialize>(&self, kind: &str, key: &str, payload: &T) -> Result<()> {
        let Some(path) = self.path(kind, key) else {
            return Ok(());
        };
        let dir = self.dir.as_ref().expect("path implies dir");
        std::fs::create_dir_all(dir)?;
        let entry = CacheEntry { key: key.to_string(), version: SCHEMA_VERSION, payload };
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        std::fs::rename(&tmp, &path).map_err(Error::Io)
    }

    /// Cached value or `compute()`, storing fresh results.
    pub fn get_or<T, F>(&self, kind: &str, key: &str, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(hit) = self.get(kind, key) {
            return Ok(hit);
        }
        let value = compute()?;
        self.put(kind, key, &value)?;
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_version_check() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let key = cache_key("t", "abc", &[1.0f64, 0.1]).unwrap();
        assert_eq!(cache.get::<Vec<f64>>("t", &key), None);
        let v = cache.get_or("t", &key, || Ok(vec![0.1f64, 1e-17, std::f64::consts::PI])).unwrap();
        assert_eq!(cache.get::<Vec<f64>>("t", &key), Some(v.clone()));

        // A stale schema version is a miss.
        let stale = CacheEntry { key: key.clone(), version: SCHEMA_VERSION + 1, payload: vec![9.0f64] };
        std::fs::write(dir.path().join(format!("t-{key}.json")), serde_json::to_vec(&stale).unwrap()).unwrap();
        assert_eq!(cache.get::<Vec<f64>>("t", &key), None);
    }

    #[test]
    fn keys_depend_on_every_input() {
        let a = cache_key("placements", "h", &1.0f64).unwrap();
        assert_ne!(a, cache_key("grasps", "h", &1.0f64).unwrap());
        assert_ne!(a, cache_key("placements", "g", &1.0f64).unwrap());
        assert_ne!(a, cache_key("placements", "h", &2.0f64).unwrap());
        assert_eq!(a, cache_key("placements", "h", &1.0f64).unwrap());
    }

    #[test]
    fn disabled_cache_always_computes() {
        let cache = Cache::default();
        let mut calls = 0;
        for _ in 0..2 {
            cache
                .get_or("t", "k", || {
                    calls += 1;
                    Ok(1u8)
                })
                .unwrap();
        }
        assert_eq!(calls, 2);
    }
}
