use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub af_cli: String,
    pub af_core: String,
}

impl Versions {
    pub fn current() -> Self {
        Self { af_cli: env!("CARGO_PKG_VERSION").to_string(), af_core: af_core::VERSION.to_string() }
    }
}

/// Record of one invocation, written next to its outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Resolved settings as given in the config file and flags.
    pub config: BTreeMap<String, String>,
    pub versions: Versions,
    pub wall_time_s: f64,
    pub outputs: Vec<PathBuf>,
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        std::fs::write(path, text + "\n")
    }
}
