//! Optional on-disk memo of per-n result rows, enabled by setting
//! SZEGOLAB_CACHE_DIR. Entries are keyed by the tool version and the
//! config restricted to one n, so a hit reproduces the computed rows
//! exactly. Unreadable entries are ignored and recomputed.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::report::write_atomic;
use crate::run::{Row, VERSION};

pub const CACHE_ENV: &str = "SZEGOLAB_CACHE_DIR";

pub fn key(cfg: &ExperimentConfig, n: usize) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty())?;
    let mut c = cfg.at_n(n);
    c.output_path.clear();
    let mut h = Sha256::new();
    h.update(VERSION.as_bytes());
    h.update([0]);
    h.update(serde_json::to_vec(&c).ok()?);
    let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    Some(PathBuf::from(dir).join(format!("{hex}.json")))
}

pub fn load(path: &Path) -> Option<Vec<Row>> {
    serde_json::from_slice(&std::fs::read(path).ok()?).ok()
}

pub fn store(path: &Path, rows: &[Row]) {
    if let Ok(bytes) = serde_json::to_vec(rows) {
        let _ = write_atomic(path, &bytes);
    }
}
