//! Run records: the deterministic line-delimited record stream, the human
//! summary, and the output-directory plumbing.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

/// Digest of the canonical serialized config; ties records to their inputs.
pub fn config_digest(cfg: &ExperimentConfig) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(cfg).expect("config serializes"));
    hasher
        .finalize()
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// One named check with a pass/fail verdict and a short detail string.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Everything a run produces. The `stream` is the deterministic part: one
/// serialized record per line, byte-identical across reruns and job counts.
/// Timing lives only in the summary.
pub struct RunOutput {
    pub kind: &'static str,
    pub config_digest: String,
    pub stream: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub fixtures: Vec<PathBuf>,
    /// Extra deterministic files: (relative path, contents).
    pub artifacts: Vec<(String, String)>,
}

impl RunOutput {
    pub fn new(kind: &'static str, digest: String) -> Self {
        Self {
            kind,
            config_digest: digest,
            stream: Vec::new(),
            checks: Vec::new(),
            fixtures: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn push_record<T: Serialize>(&mut self, record: &T) {
        self.stream
            .push(serde_json::to_string(record).expect("record serializes"));
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult::new(name, pass, detail));
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Write the record stream and artifacts under `out_dir`.
    pub fn write_to(&self, out_dir: &Path) -> anyhow::Result<()> {
        fs::create_dir_all(out_dir)?;
        let mut stream = String::new();
        for line in &self.stream {
            stream.push_str(line);
            stream.push('\n');
        }
        fs::write(out_dir.join("records.jsonl"), stream)?;
        for (rel, contents) in &self.artifacts {
            let path = out_dir.join(rel);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, contents)?;
        }
        Ok(())
    }

    /// Human summary printed after a run; includes timing, hence never part of
    /// the deterministic stream.
    pub fn print_summary(&self, out_dir: &Path, duration_ms: u128) {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        println!(
            "[{}] config {} | {} records | checks {}/{} passed | {} ms | out: {}",
            self.kind,
            self.config_digest,
            self.stream.len(),
            passed,
            self.checks.len(),
            duration_ms,
            out_dir.display()
        );
        for c in self.failed_checks() {
            println!("  FAIL {}: {}", c.name, c.detail);
        }
        if !self.fixtures.is_empty() {
            for f in &self.fixtures {
                println!("  fixture: {}", f.display());
            }
        }
    }
}

/// Write a failure fixture as pretty JSON; returns the path.
pub fn write_fixture<T: Serialize>(
    out_dir: &Path,
    name: &str,
    fixture: &T,
) -> anyhow::Result<PathBuf> {
    let dir = out_dir.join("fixtures");
    fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{name}.json"));
    let mut file = fs::File::create(&path)?;
    file.write_all(serde_json::to_string_pretty(fixture)?.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(path)
}
