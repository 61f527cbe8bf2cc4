use super::Result;
use sha2::{Digest, Sha256};
use std::path::PathBuf;

/// Environment variable naming the cache directory; caching is off when unset.
pub const CACHE_ENV: &str = "GRADEDCM_CACHE_DIR";

/// Content-addressed store of job artifacts. An entry is the SHA-256 of its
/// payload on the first line followed by the payload.
#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    /// The entry failed its integrity check and was recomputed.
    Corrupt,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).map(PathBuf::from))
    }

    pub fn enabled(&self) -> bool {
        self.dir.is_some()
    }

    /// Key for a set of semantic inputs: the hash of their canonical JSON,
    /// tagged with the crate version.
    pub fn key(inputs: &serde_json::Value) -> String {
        let canon = serde_json::json!({"version": env!("CARGO_PKG_VERSION"), "inputs": inputs});
        digest(canon.to_string().as_bytes())
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.entry")))
    }

    fn read(&self, key: &str) -> Option<std::result::Result<String, ()>> {
        let raw = std::fs::read_to_string(self.path(key)?).ok()?;
        let Some((hash, payload)) = raw.split_once('\n') else { return Some(Err(())) };
        if digest(payload.as_bytes()) == hash {
            Some(Ok(payload.to_string()))
        } else {
            Some(Err(()))
        }
    }

    /// Returns the stored payload for `key`, or runs `producer` and stores its result.
    pub fn get_or_compute(
        &self,
        key: &str,
        producer: impl FnOnce() -> Result<String>,
    ) -> Result<(String, Lookup)> {
        let status = match self.read(key) {
            Some(Ok(payload)) => return Ok((payload, Lookup::Hit)),
            Some(Err(())) => {
                eprintln!("warning: cache entry {key} is corrupt; recomputing");
                Lookup::Corrupt
            }
            None => Lookup::Miss,
        };
        let payload = producer()?;
        if let (Some(dir), Some(path)) = (&self.dir, self.path(key)) {
            std::fs::create_dir_all(dir)?;
            let tmp = path.with_extension("tmp");
            std::fs::write(&tmp, format!("{}\n{payload}", digest(payload.as_bytes())))?;
            std::fs::rename(tmp, path)?;
        }
        Ok((payload, status))
    }
}
