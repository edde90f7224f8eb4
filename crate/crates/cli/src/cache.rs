//! On-disk cache of finished exact searches.
//!
//! Entries are keyed by `(n, k, mode, tool_version)` and written through a
//! temporary file renamed into place, so concurrent writers never expose a
//! partial file; the last rename wins and all candidates are identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "CROSSINT_CACHE";

pub struct SearchCache {
    dir: PathBuf,
}

impl SearchCache {
    /// The explicit directory wins over `CROSSINT_CACHE`, which wins over the
    /// user cache directory. `None` when there is nowhere sensible to cache.
    pub fn locate(explicit: Option<&Path>) -> Option<Self> {
        let dir = match explicit {
            Some(p) => p.to_path_buf(),
            None => match std::env::var_os(CACHE_ENV) {
                Some(v) if !v.is_empty() => PathBuf::from(v),
                _ => default_dir()?,
            },
        };
        Some(SearchCache { dir })
    }

    fn entry(&self, n: u32, k: u32, mode: &str) -> PathBuf {
        self.dir.join(format!(
            "search-n{n}-k{k}-{mode}-v{}.json",
            crossint_core::TOOL_VERSION
        ))
    }

    pub fn load(&self, n: u32, k: u32, mode: &str) -> Option<String> {
        let text = fs::read_to_string(self.entry(n, k, mode)).ok()?;
        serde_json::from_str::<serde_json::Value>(&text).ok()?;
        Some(text)
    }

    pub fn store(&self, n: u32, k: u32, mode: &str, text: &str) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(text.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.entry(n, k, mode)).map_err(|e| e.error)?;
        Ok(())
    }
}

fn default_dir() -> Option<PathBuf> {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return Some(PathBuf::from(x).join("crossint"));
    }
    let home = std::env::var_os("HOME").filter(|v| !v.is_empty())?;
    Some(PathBuf::from(home).join(".cache").join("crossint"))
}
