//! Reproducibility manifests. The manifest carries everything needed to
//! replay a CLI invocation plus digests of what it produced; it is written
//! only to an explicitly requested side-channel path so that the primary
//! outputs stay byte-identical across reruns.

use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutputDigest {
    /// label for the artifact (a path, or "stdout")
    pub name: String,
    /// hex-encoded SHA-256 of the artifact bytes
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: u32,
    /// package version the run was produced with
    pub tool_version: String,
    /// the argv the tool was invoked with
    pub command: Vec<String>,
    /// construction spec ids the run touched
    pub specs: Vec<String>,
    /// grid side lengths the run touched
    pub n_values: Vec<usize>,
    /// every seed that fed an RNG
    pub seeds: Vec<u64>,
    pub wall_time_secs: f64,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut body = serde_json::to_string_pretty(self)?;
        body.push('\n');
        fs::write(path, body)?;
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Accumulates manifest fields as a run progresses.
pub struct ManifestBuilder {
    start: Instant,
    command: Vec<String>,
    specs: Vec<String>,
    n_values: Vec<usize>,
    seeds: Vec<u64>,
    outputs: Vec<OutputDigest>,
}

impl ManifestBuilder {
    pub fn new(command: Vec<String>) -> Self {
        ManifestBuilder {
            start: Instant::now(),
            command,
            specs: Vec::new(),
            n_values: Vec::new(),
            seeds: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn spec(&mut self, id: &str) {
        self.specs.push(id.to_string());
    }

    pub fn n(&mut self, n: usize) {
        self.n_values.push(n);
    }

    pub fn seed(&mut self, seed: u64) {
        self.seeds.push(seed);
    }

    pub fn output(&mut self, name: &str, bytes: &[u8]) {
        self.outputs.push(OutputDigest {
            name: name.to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn finish(self) -> RunManifest {
        RunManifest {
            version: MANIFEST_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command,
            specs: self.specs,
            n_values: self.n_values,
            seeds: self.seeds,
            wall_time_secs: self.start.elapsed().as_secs_f64(),
            outputs: self.outputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn manifest_round_trips() {
        let mut b = ManifestBuilder::new(vec!["tool".into(), "construct".into()]);
        b.spec("h3");
        b.n(4);
        b.seed(7);
        b.output("stdout", b"9 edges\n");
        let m = b.finish();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        m.write(&path).unwrap();
        let back: RunManifest =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back.version, MANIFEST_VERSION);
        assert_eq!(back.specs, vec!["h3".to_string()]);
        assert_eq!(back.n_values, vec![4]);
        assert_eq!(back.seeds, vec![7]);
        assert_eq!(back.outputs.len(), 1);
        assert_eq!(back.outputs[0].sha256, sha256_hex(b"9 edges\n"));
        assert!(back.wall_time_secs >= 0.0);
    }
}
