//! Append-only JSON-lines store of computed values.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::open::Insertion;
use crate::ENGINE_VERSION;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub value: String,
    pub engine_version: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed cache record at {path}:{line}: {message}")]
    Malformed { path: PathBuf, line: usize, message: String },
    #[error("cache mismatch for {key}: cached {cached}, computed {computed}")]
    Mismatch { key: String, cached: String, computed: String },
}

/// `side|d1,d2|alpha:a,...`
pub fn cache_key(side: &str, beta: (u32, u32), insertions: &[Insertion]) -> String {
    let ins: Vec<String> = insertions.iter().map(|i| format!("{}:{}", i.alpha, i.a)).collect();
    format!("{side}|{},{}|{}", beta.0, beta.1, ins.join(","))
}

#[derive(Debug)]
pub struct ResultCache {
    path: PathBuf,
    records: BTreeMap<String, String>,
}

impl ResultCache {
    /// Loads `path`; a missing file is an empty cache.
    pub fn open(path: &Path) -> Result<Self, CacheError> {
        let io = |source| CacheError::Io { path: path.to_path_buf(), source };
        let mut records: BTreeMap<String, String> = BTreeMap::new();
        let file = match File::open(path) {
            Ok(f) => Some(f),
            Err(e) if e.kind() == ErrorKind::NotFound => None,
            Err(e) => return Err(io(e)),
        };
        if let Some(file) = file {
            for (n, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: CacheRecord = serde_json::from_str(&line).map_err(|e| CacheError::Malformed {
                    path: path.to_path_buf(),
                    line: n + 1,
                    message: e.to_string(),
                })?;
                match records.get(&rec.key) {
                    Some(v) if *v != rec.value => {
                        return Err(CacheError::Mismatch {
                            key: rec.key,
                            cached: v.clone(),
                            computed: rec.value,
                        })
                    }
                    Some(_) => {}
                    None => {
                        records.insert(rec.key, rec.value);
                    }
                }
            }
        }
        Ok(ResultCache {
            path: path.to_path_buf(),
            records,
        })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.records.get(key).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Checks `value` against an existing record, or appends a new one.
    pub fn record(&mut self, key: &str, value: &str) -> Result<(), CacheError> {
        if let Some(cached) = self.records.get(key) {
            if cached != value {
                return Err(CacheError::Mismatch {
                    key: key.to_string(),
                    cached: cached.clone(),
                    computed: value.to_string(),
                });
            }
            return Ok(());
        }
        let rec = CacheRecord {
            key: key.to_string(),
            value: value.to_string(),
            engine_version: ENGINE_VERSION.to_string(),
        };
        let io = |source| CacheError::Io { path: self.path.clone(), source };
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path).map_err(io)?;
        let line = serde_json::to_string(&rec).expect("record serializes");
        writeln!(file, "{line}").map_err(io)?;
        self.records.insert(rec.key, rec.value);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_format() {
        let ins = [Insertion::new(1, 0), Insertion::new(2, 1)];
        assert_eq!(cache_key("disk", (2, 1), &ins), "disk|2,1|1:0,2:1");
        assert_eq!(cache_key("closed", (1, 0), &[]), "closed|1,0|");
    }

    #[test]
    fn round_trip_and_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let mut c = ResultCache::open(&path).unwrap();
        assert!(c.is_empty());
        c.record("disk|1,0|", "1 * u^0").unwrap();
        c.record("disk|1,0|", "1 * u^0").unwrap();
        let mut c = ResultCache::open(&path).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.get("disk|1,0|"), Some("1 * u^0"));
        assert!(matches!(c.record("disk|1,0|", "2 * u^0"), Err(CacheError::Mismatch { .. })));
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 1);
    }

    #[test]
    fn conflicting_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let a = r#"{"key":"k","value":"1","engine_version":"0"}"#;
        let b = r#"{"key":"k","value":"2","engine_version":"0"}"#;
        std::fs::write(&path, format!("{a}\n{b}\n")).unwrap();
        assert!(matches!(ResultCache::open(&path), Err(CacheError::Mismatch { .. })));
        std::fs::write(&path, "not json\n").unwrap();
        assert!(matches!(ResultCache::open(&path), Err(CacheError::Malformed { line: 1, .. })));
    }
}
