use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Everything needed to reproduce a run. Two runs with equal manifests
/// (timing aside) print the same bytes.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    /// SHA-256 of each input in canonical form: the check matrices for
    /// builder specs, raw bytes for files.
    pub inputs: BTreeMap<String, String>,
    pub version: String,
    pub seed: u64,
    /// Wall time in milliseconds, present only with `--timing`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl RunManifest {
    pub fn new(command: Vec<String>, seed: u64) -> Self {
        RunManifest {
            command,
            inputs: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            timing_ms: None,
        }
    }

    pub fn record(&mut self, key: impl Into<String>, bytes: &[u8]) {
        self.inputs
            .insert(key.into(), hex::encode(Sha256::digest(bytes)));
    }
}
