use std::ffi::OsString;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::Global;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// What is needed to re-run a command and check that it reproduced its outputs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config: serde_json::Value,
    pub seed: u64,
    pub versions: Versions,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputDigest>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Versions {
    pub veech: String,
    pub target_os: String,
    pub target_arch: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(args: &[OsString], g: &Global, config: serde_json::Value, wall_time_s: f64, outputs: &[(PathBuf, &[u8])]) -> Self {
        let mut cfg = serde_json::json!({ "global": g });
        cfg["command"] = config;
        RunManifest {
            command_line: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
            config: cfg,
            seed: g.seed,
            versions: Versions {
                veech: env!("CARGO_PKG_VERSION").to_string(),
                target_os: std::env::consts::OS.to_string(),
                target_arch: std::env::consts::ARCH.to_string(),
            },
            wall_time_s,
            outputs: outputs
                .iter()
                .map(|(p, b)| OutputDigest { path: p.display().to_string(), sha256: sha256_hex(b), bytes: b.len() as u64 })
                .collect(),
        }
    }

    pub fn path_for(output: &Path) -> PathBuf {
        let mut s = output.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }

    pub fn write_next_to(&self, output: &Path) -> anyhow::Result<()> {
        let mut s = serde_json::to_vec_pretty(self)?;
        s.push(b'\n');
        std::fs::write(Self::path_for(output), s)?;
        Ok(())
    }

    /// True if every recorded output still has its recorded digest.
    pub fn outputs_match(&self) -> bool {
        self.outputs
            .iter()
            .all(|o| std::fs::read(&o.path).map(|b| sha256_hex(&b) == o.sha256).unwrap_or(false))
    }
}
