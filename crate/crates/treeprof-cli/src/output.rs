//! Output plumbing: CSV/JSON artifacts, run manifests, content digests.
//!
//! Artifacts are rendered fully in memory, digested, and only then written,
//! so the manifest can reference every emitted file by SHA-256 and identical
//! configurations produce byte-identical files. Wall time lives exclusively
//! in the manifest's `excluded` object, which is the only part allowed to
//! differ between reruns.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// Formats a float with 17 significant digits (exact round-trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// RFC-4180 field quoting: quote fields holding commas, quotes, or line
/// breaks and double any embedded quotes; everything else passes through.
pub fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') || raw.contains('\r') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

/// One output file rendered in memory.
pub struct Artifact {
    buffer: String,
}

impl Artifact {
    pub fn csv() -> Self {
        Self {
            buffer: String::new(),
        }
    }

    pub fn json<T: Serialize>(value: &T) -> serde_json::Result<Self> {
        let mut buffer = serde_json::to_string_pretty(value)?;
        buffer.push('\n');
        Ok(Self { buffer })
    }

    /// Appends one CSV record, quoting per RFC 4180.
    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let mut first = true;
        for field in fields {
            if !first {
                self.buffer.push(',');
            }
            self.buffer.push_str(&csv_field(field.as_ref()));
            first = false;
        }
        self.buffer.push('\n');
    }

    pub fn sha256_hex(&self) -> String {
        hex::encode(Sha256::digest(self.buffer.as_bytes()))
    }

    /// Writes to `path`, or to stdout when no path is given. Returns the
    /// manifest record for file outputs.
    pub fn emit(&self, path: Option<&Path>) -> io::Result<Option<OutputRecord>> {
        match path {
            None => {
                io::stdout().write_all(self.buffer.as_bytes())?;
                Ok(None)
            }
            Some(p) => {
                if let Some(parent) = p.parent() {
                    if !parent.as_os_str().is_empty() {
                        std::fs::create_dir_all(parent)?;
                    }
                }
                std::fs::write(p, self.buffer.as_bytes())?;
                Ok(Some(OutputRecord {
                    path: p.display().to_string(),
                    sha256: self.sha256_hex(),
                    bytes: self.buffer.len(),
                }))
            }
        }
    }
}

/// Identity of one emitted data file.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// One named pass/fail measurement performed during a run.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: &'static str,
    pub pass: bool,
    pub value: f64,
}

/// Reproducibility record written next to each data file.
///
/// Everything outside `excluded` is a pure function of the configuration,
/// so manifests from identical runs differ only inside `excluded`.
#[derive(Debug, Serialize)]
pub struct Manifest<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: C,
    pub outputs: Vec<OutputRecord>,
    pub checks: Vec<CheckRecord>,
    pub excluded: Excluded,
}

/// Timing data deliberately excluded from the determinism contract.
#[derive(Debug, Serialize)]
pub struct Excluded {
    pub wall_time_seconds: f64,
}

/// Path of the manifest that accompanies `data_path`.
pub fn manifest_path(data_path: &Path) -> PathBuf {
    let mut name = data_path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Serializes and writes a manifest next to its data file.
pub fn write_manifest<C: Serialize>(data_path: &Path, manifest: &Manifest<C>) -> io::Result<()> {
    let rendered = serde_json::to_string_pretty(manifest)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    std::fs::write(manifest_path(data_path), format!("{rendered}\n"))
}
