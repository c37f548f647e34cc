//! Machine-readable verification outcomes.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exactalg::RingElem;

/// Terms kept in a failing residual.
pub const RESIDUAL_TERMS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Degenerate,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: serde_json::Value,
    pub status: Status,
    pub residual: String,
    pub wall_time_ms: u64,
    pub instance_hash: String,
}

impl VerificationReport {
    /// Pass iff `residual` is the zero element.
    pub fn from_residual(suite: &str, params: serde_json::Value, residual: &RingElem, instance_hash: &str) -> Self {
        let status = if residual.is_zero() { Status::Pass } else { Status::Fail };
        VerificationReport {
            suite: suite.to_string(),
            params,
            status,
            residual: residual.to_string_truncated(RESIDUAL_TERMS),
            wall_time_ms: 0,
            instance_hash: instance_hash.to_string(),
        }
    }

    pub fn with_status(suite: &str, params: serde_json::Value, status: Status, note: &str, instance_hash: &str) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            params,
            status,
            residual: note.to_string(),
            wall_time_ms: 0,
            instance_hash: instance_hash.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Key used to order reports deterministically.
    pub fn sort_key(&self) -> (String, String) {
        (self.suite.clone(), self.params.to_string())
    }
}

/// Runs `f`, stamping the elapsed time on its report.
pub fn timed(f: impl FnOnce() -> VerificationReport) -> VerificationReport {
    let start = Instant::now();
    let mut r = f();
    r.wall_time_ms = start.elapsed().as_millis() as u64;
    r
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
