//! Run manifests: every invocation records enough to reproduce it exactly.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub timestamp_unix: u64,
    pub config_hash: String,
    pub git_describe: String,
    pub output_paths: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, seed: Option<u64>) -> Self {
        let canonical = serde_json::to_vec(&parameters).unwrap_or_default();
        let mut hasher = Sha256::new();
        hasher.update(&canonical);
        let config_hash = format!("{:x}", hasher.finalize());
        RunManifest {
            command: command.to_string(),
            parameters,
            seed,
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config_hash,
            git_describe: git_describe(),
            output_paths: Vec::new(),
        }
    }
}

fn git_describe() -> String {
    std::process::Command::new("git")
        .args(["describe", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|o| String::from_utf8_lossy(&o.stdout).trim().to_string())
        .unwrap_or_else(|| "unknown".to_string())
}
