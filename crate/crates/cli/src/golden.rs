//! Frozen envelope constants. The first run for a given key writes the file;
//! later runs with the same grid and config must not exceed it.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::config::sha256_hex;
use crate::record::{GoldenCheck, GoldenStatus};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenFile {
    pub claim_id: String,
    pub constant: f64,
    pub grid_hash: String,
    pub config_hash: String,
}

pub const GOLDEN_ENV: &str = "ZETASUM_GOLDEN_DIR";

pub fn golden_dir() -> PathBuf {
    match std::env::var_os(GOLDEN_ENV) {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/golden")),
    }
}

/// Hash of the exact bits of every grid value.
pub fn grid_hash(values: &[f64]) -> String {
    let bytes: Vec<u8> = values.iter().flat_map(|v| v.to_bits().to_le_bytes()).collect();
    sha256_hex(&bytes)
}

pub fn check_in(dir: &Path, key: &str, constant: f64, grid: &str, config: &str) -> anyhow::Result<GoldenCheck> {
    let path = dir.join(format!("{key}.json"));
    let status_of = |frozen: f64, status| GoldenCheck { key: key.to_string(), constant, frozen, status };
    if !path.exists() {
        let g = GoldenFile { claim_id: key.to_string(), constant, grid_hash: grid.into(), config_hash: config.into() };
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut text = serde_json::to_string_pretty(&g)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        return Ok(status_of(constant, GoldenStatus::Frozen));
    }
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let g: GoldenFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if g.grid_hash != grid || g.config_hash != config {
        return Ok(status_of(g.constant, GoldenStatus::Incomparable));
    }
    let status = if constant <= g.constant { GoldenStatus::Within } else { GoldenStatus::Exceeded };
    Ok(status_of(g.constant, status))
}

pub fn check(key: &str, constant: f64, grid: &str, config: &str) -> anyhow::Result<GoldenCheck> {
    check_in(&golden_dir(), key, constant, grid, config)
}
