//! File output. Every file starts with one `#` metadata line and is written
//! in one piece after aggregation.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

pub fn meta_line(config_hash: &str, base_seed: &str) -> String {
    format!(
        "config_hash={config_hash} base_seed={base_seed} version={}",
        active_cover::VERSION
    )
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

/// Prefixes CSV text with the metadata comment.
pub fn with_meta(meta: &str, body: &[u8]) -> Vec<u8> {
    let mut out = format!("# {meta}\n").into_bytes();
    out.extend_from_slice(body);
    out
}
