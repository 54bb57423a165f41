//! Persistent point-count cache: one JSON object per curve, keyed by the
//! canonical curve string, mapping `n` to `#C(F_{q^n})` as a decimal string.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::curves::{self, CountRecord, CurveSpec};

/// Environment variable overriding the cache location.
pub const CACHE_ENV: &str = "MOBFROB_CACHE";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache file {path} is corrupt: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },
    #[error("cache i/o on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

type Entries = BTreeMap<String, BTreeMap<usize, String>>;

#[derive(Debug)]
pub struct CacheStore {
    path: PathBuf,
    entries: Entries,
}

impl CacheStore {
    /// Loads the store; a missing file is an empty cache.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let path = path.into();
        let entries = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str::<Entries>(&text).map_err(|e| CacheError::CacheCorrupt {
                path: path.clone(),
                reason: e.to_string(),
            })?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Entries::new(),
            Err(source) => return Err(CacheError::Io { path, source }),
        };
        Ok(CacheStore { path, entries })
    }

    /// Like [`open`](Self::open), but a corrupt file is discarded. The
    /// corruption is returned so the caller can warn about it.
    pub fn open_or_rebuild(path: impl Into<PathBuf>) -> Result<(Self, Option<CacheError>), CacheError> {
        let path = path.into();
        match Self::open(&path) {
            Ok(store) => Ok((store, None)),
            Err(e @ CacheError::CacheCorrupt { .. }) => Ok((CacheStore { path, entries: Entries::new() }, Some(e))),
            Err(e) => Err(e),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, spec: &CurveSpec, n: usize) -> Option<CountRecord> {
        let count = self.entries.get(&spec.spec_string())?.get(&n)?.parse().ok()?;
        Some(CountRecord::new(spec.q(), n, count))
    }

    pub fn insert(&mut self, spec: &CurveSpec, record: &CountRecord) {
        self.entries
            .entry(spec.spec_string())
            .or_default()
            .insert(record.n, record.count.to_string());
    }

    /// Cached record, or a fresh count that is stored and flushed.
    pub fn get_or_count(&mut self, spec: &CurveSpec, n: usize, budget: u128) -> curves::Result<CountRecord> {
        if let Some(r) = self.get(spec, n) {
            return Ok(r);
        }
        let r = curves::count_points(spec, n, budget)?;
        self.insert(spec, &r);
        // a failed write only loses the memo
        let _ = self.save();
        Ok(r)
    }

    /// Writes through a temporary file and renames it into place.
    pub fn save(&self) -> Result<(), CacheError> {
        let io = |source| CacheError::Io { path: self.path.clone(), source };
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(io)?;
        }
        let tmp = self.path.with_extension(format!("tmp{}", std::process::id()));
        let text = serde_json::to_string_pretty(&self.entries).expect("serialisable");
        let mut file = fs::File::create(&tmp).map_err(io)?;
        file.write_all(text.as_bytes()).map_err(io)?;
        file.sync_all().map_err(io)?;
        fs::rename(&tmp, &self.path).map_err(io)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::DEFAULT_ENUMERATION_BUDGET as BUDGET;

    #[test]
    fn miss_then_hit_agree() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.json");
        let e = CurveSpec::elliptic_over_prime(5, 1, 0).unwrap();
        let mut store = CacheStore::open(&path).unwrap();
        let miss = store.get_or_count(&e, 2, BUDGET).unwrap();
        let reloaded = CacheStore::open(&path).unwrap();
        assert_eq!(reloaded.get(&e, 2), Some(miss));
        assert_eq!(reloaded.entries, store.entries);
    }

    #[test]
    fn deleted_file_recounts() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.json");
        let e = CurveSpec::elliptic_over_prime(5, 1, 0).unwrap();
        let first = CacheStore::open(&path).unwrap().get_or_count(&e, 1, BUDGET).unwrap();
        fs::remove_file(&path).unwrap();
        let second = CacheStore::open(&path).unwrap().get_or_count(&e, 1, BUDGET).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn corrupt_file_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.json");
        fs::write(&path, "{ not json").unwrap();
        assert!(matches!(CacheStore::open(&path), Err(CacheError::CacheCorrupt { .. })));
        let (mut store, warning) = CacheStore::open_or_rebuild(&path).unwrap();
        assert!(warning.is_some());
        let e = CurveSpec::elliptic_over_prime(3, 1, 0).unwrap();
        assert_eq!(store.get_or_count(&e, 1, BUDGET).unwrap().count, 4);
        assert!(CacheStore::open(&path).is_ok());
    }
}
