use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ScenarioConfig;

/// Git-style blob hash: SHA-256 over `"blob <len>\0"` followed by the bytes.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    format!("sha256:{}", hex::encode(h.finalize()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub index: usize,
    /// Absent for unitary trajectories.
    pub epsilon: Option<f64>,
    pub tau: Option<f64>,
    pub status: CellStatus,
    pub steps_completed: usize,
    pub error: Option<String>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Relative to the output directory.
    pub path: String,
    /// Data rows, excluding the header; absent for JSON files.
    pub rows: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    pub config: ScenarioConfig,
    pub config_hash: String,
    /// Inverse temperature of the canonical reference state after resolving `"auto"`.
    pub beta: Option<f64>,
    pub float_digits: usize,
    pub workers: usize,
    pub files: Vec<FileEntry>,
    pub cells: Vec<CellReport>,
    pub baseline: Option<CellReport>,
    pub total_seconds: f64,
}

impl RunManifest {
    pub fn failed_cells(&self) -> usize {
        self.cells
            .iter()
            .chain(self.baseline.as_ref())
            .filter(|c| c.status == CellStatus::Failed)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blob_hash_matches_git_construction() {
        // sha256 of "blob 0\0"
        assert_eq!(
            content_hash(b""),
            "sha256:473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
    }
}
