//! On-disk cache of serialized count slices.
//!
//! Entries are keyed by everything that determines their bytes, including
//! [`ENGINE_VERSION`]. Bumping the version makes old entries unreachable;
//! nothing is ever deleted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Bumped on any change to an engine or to the slice format.
pub const ENGINE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub kind: &'static str,
    pub rank: usize,
    pub length: usize,
    pub engine: &'static str,
    pub radius: Option<usize>,
}

impl CacheKey {
    pub fn file_name(&self) -> String {
        let radius = self.radius.map_or_else(|| "full".to_string(), |r| format!("r{r}"));
        format!(
            "{}-k{}-m{}-{}-{}-v{}.json",
            self.kind, self.rank, self.length, self.engine, radius, ENGINE_VERSION
        )
    }
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Self { dir: dir.to_path_buf() }
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    pub fn get(&self, key: &CacheKey) -> Result<Option<String>, CliError> {
        let path = self.path(key);
        match fs::read_to_string(&path) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(CliError::io(&path, e)),
        }
    }

    /// Writes through a temporary file in the same directory and renames it
    /// into place, so readers never see a partial entry.
    pub fn put(&self, key: &CacheKey, contents: &str) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(tmp.path(), e))?;
        let path = self.path(key);
        tmp.persist(&path).map_err(|e| CliError::io(&path, e.error))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_distinguishes_everything() {
        let a = CacheKey {
            kind: "count",
            rank: 2,
            length: 5,
            engine: "dp",
            radius: None,
        };
        let mut b = a.clone();
        b.radius = Some(3);
        let mut c = a.clone();
        c.engine = "oracle";
        assert_ne!(a.file_name(), b.file_name());
        assert_ne!(a.file_name(), c.file_name());
        assert!(a.file_name().ends_with(&format!("-v{ENGINE_VERSION}.json")));
    }

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(&dir.path().join("nested"));
        let key = CacheKey {
            kind: "count",
            rank: 2,
            length: 1,
            engine: "dp",
            radius: None,
        };
        assert_eq!(cache.get(&key).unwrap(), None);
        cache.put(&key, "abc\n").unwrap();
        assert_eq!(cache.get(&key).unwrap().as_deref(), Some("abc\n"));
        cache.put(&key, "def\n").unwrap();
        assert_eq!(cache.get(&key).unwrap().as_deref(), Some("def\n"));
    }
}
