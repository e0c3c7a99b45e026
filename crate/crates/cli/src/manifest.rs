use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    /// Input path to sha256 hex digest.
    pub inputs: BTreeMap<String, String>,
    pub version: String,
    /// Output name to sha256 hex digest.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: Vec<String>, inputs: &[PathBuf], stdout: &str) -> anyhow::Result<Self> {
        let mut digests = BTreeMap::new();
        for p in inputs {
            digests.insert(p.display().to_string(), sha256_hex(&std::fs::read(p)?));
        }
        let mut outputs = BTreeMap::new();
        outputs.insert("stdout".to_string(), sha256_hex(stdout.as_bytes()));
        Ok(RunManifest { command, inputs: digests, version: env!("CARGO_PKG_VERSION").to_string(), outputs })
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        std::fs::write(path, crate::render::canonical_json(self)?)?;
        Ok(())
    }
}
