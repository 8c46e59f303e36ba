//! On-disk cache of null tables keyed by a hash of their parameters.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::null::null_tables_with;
use super::{NullSampler, NullTable, SCHEMA_VERSION, VERSION};
use crate::error::Result;

/// Overrides the cache location.
pub const CACHE_ENV: &str = "SKEWGOF_CACHE_DIR";

pub fn cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_ENV) {
        return PathBuf::from(dir);
    }
    match std::env::var_os("XDG_CACHE_HOME").or_else(|| std::env::var_os("HOME").map(|h| {
        let mut p = PathBuf::from(h);
        p.push(".cache");
        p.into_os_string()
    })) {
        Some(base) => PathBuf::from(base).join("skewgof"),
        None => std::env::temp_dir().join("skewgof"),
    }
}

#[derive(Serialize)]
struct Key<'a> {
    schema_version: u32,
    version: &'a str,
    sampler: String,
    n: usize,
    replicates: usize,
    seed: u64,
}

pub fn cache_key(sampler: &NullSampler, n: usize, replicates: usize, seed: u64) -> String {
    let key = Key {
        schema_version: SCHEMA_VERSION,
        version: VERSION,
        sampler: sampler.label(),
        n,
        replicates,
        seed,
    };
    let bytes = serde_json::to_vec(&key).expect("key serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Null tables for all eight statistics, read from `dir` when present and
/// written there after a fresh simulation. `None` bypasses the cache.
pub fn cached_null_tables(
    sampler: &NullSampler,
    n: usize,
    replicates: usize,
    seed: u64,
    dir: Option<&Path>,
) -> Result<Vec<NullTable>> {
    let Some(dir) = dir else {
        return null_tables_with(sampler, n, replicates, seed);
    };
    let path = dir.join(format!("null-{}.json", cache_key(sampler, n, replicates, seed)));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(tables) = serde_json::from_str::<Vec<NullTable>>(&text) {
            if tables.len() == 8 && tables.iter().all(|t| t.schema_version == SCHEMA_VERSION) {
                return Ok(tables);
            }
        }
    }
    let tables = null_tables_with(sampler, n, replicates, seed)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(&tables)?)?;
    fs::rename(&tmp, &path)?;
    Ok(tables)
}
