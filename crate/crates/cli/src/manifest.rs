//! Run manifest: config hash, seeds, per-stage input/output hashes and
//! the tool version. No wall-clock data, so re-running identical inputs
//! reproduces the manifest byte for byte.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct StageRecord {
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub config_hash: String,
    pub seeds: BTreeMap<String, u64>,
    pub stages: BTreeMap<String, StageRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn hash_file(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Data(format!("cannot hash {}: {e}", path.display())))?;
    Ok(sha256_hex(&bytes))
}

impl Manifest {
    pub fn for_config(config: &PipelineConfig) -> Manifest {
        let mut seeds = BTreeMap::new();
        seeds.insert("split".to_string(), config.split.seed);
        seeds.insert("cluster".to_string(), config.cluster.seed);
        if let Some(gen) = &config.gen {
            seeds.insert("gen".to_string(), gen.seed);
        }
        Manifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: sha256_hex(config.canonical_json().as_bytes()),
            seeds,
            stages: BTreeMap::new(),
        }
    }

    /// Load an existing manifest if it belongs to the same config;
    /// otherwise start fresh.
    pub fn load_or_new(path: &Path, config: &PipelineConfig) -> Manifest {
        let fresh = Manifest::for_config(config);
        let Ok(text) = std::fs::read_to_string(path) else {
            return fresh;
        };
        match serde_json::from_str::<Manifest>(&text) {
            Ok(m) if m.config_hash == fresh.config_hash && m.tool_version == fresh.tool_version => {
                m
            }
            _ => fresh,
        }
    }

    pub fn record_stage(&mut self, stage: &str, record: StageRecord) {
        self.stages.insert(stage.to_string(), record);
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        crate::write_atomic(path, text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_is_stable() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
