use crate::instance::Provenance;
use anyhow::{Context, Result};
use dimerlab_core::experiments::{ExperimentConfig, Mode};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

/// Everything needed to rerun a command: the effective configuration and
/// its hash, the seed, and the program versions.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: Vec<String>,
    pub seed: u64,
    pub mode: Option<Mode>,
    pub threads: Option<usize>,
    pub config_sha256: Option<String>,
    pub config: Option<String>,
    pub instance: Option<Provenance>,
    pub versions: Versions,
    pub created: String,
}

#[derive(Debug, Serialize)]
pub struct Versions {
    pub dimerlab: &'static str,
    pub dimerlab_core: &'static str,
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl Manifest {
    pub fn new(seed: u64, config: Option<&ExperimentConfig>) -> Self {
        let text = config.and_then(|c| c.to_toml().ok());
        Self {
            command: std::env::args().skip(1).collect(),
            seed,
            mode: None,
            threads: None,
            config_sha256: text.as_deref().map(sha256_hex),
            config: text,
            instance: None,
            versions: Versions {
                dimerlab: env!("CARGO_PKG_VERSION"),
                dimerlab_core: dimerlab_core::VERSION,
            },
            created: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(dir.join("manifest.json"), text).context("cannot write manifest.json")
    }
}
