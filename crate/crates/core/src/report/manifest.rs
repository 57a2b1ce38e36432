//! Run manifests: enough provenance to reproduce any emitted report.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Recorded before computation starts and embedded in every report file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub params: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            tool: "voucherkit".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            inputs: Vec::new(),
            params: Vec::new(),
        }
    }

    /// Digest raw input bytes; `path` is `<builtin>` for embedded defaults.
    pub fn add_input(&mut self, role: &str, path: &str, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        let sha256 = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>();
        self.inputs.push(InputDigest { role: role.into(), path: path.into(), sha256 });
    }

    pub fn add_param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.into(), value.to_string()));
    }

    /// `#`-prefixed block for embedding at the top of CSV reports.
    pub fn comment_block(&self) -> String {
        let mut out = format!("# {} {} {}\n", self.tool, self.version, self.command);
        for input in &self.inputs {
            out.push_str(&format!(
                "# input {}={} sha256={}\n",
                input.role, input.path, input.sha256
            ));
        }
        for (key, value) in &self.params {
            out.push_str(&format!("# param {key}={value}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digests_are_stable_and_hex() {
        let mut m = RunManifest::new("estimate");
        m.add_input("survey", "a.csv", b"hello");
        assert_eq!(
            m.inputs[0].sha256,
            "2cf24dba5fb0a30e26e83b2ac5b9e29e1b161e5c1fa7425e73043362938b9824"
        );
    }

    #[test]
    fn comment_block_lists_inputs_then_params() {
        let mut m = RunManifest::new("bootstrap");
        m.add_input("survey", "s.csv", b"x");
        m.add_param("seed", 7);
        let block = m.comment_block();
        let lines: Vec<&str> = block.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("# voucherkit"));
        assert!(lines[1].contains("survey=s.csv"));
        assert!(lines[2].contains("seed=7"));
    }
}
