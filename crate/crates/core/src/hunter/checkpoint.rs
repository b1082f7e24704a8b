//! Versioned, line-oriented checkpoint records with an integrity digest,
//! written atomically (new file then rename) at window boundaries.

use crate::error::{Error, Result};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::Path;

pub const CHECKPOINT_VERSION: u32 = 1;

/// Durable state of an interrupted or finished scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuntCheckpoint {
    pub version: u32,
    /// search kind, e.g. "wolstenholme order=4" or "converse k=1 class=odd-composite"
    pub kind: String,
    /// method id, e.g. "harmonic"
    pub method: String,
    pub lo: u64,
    pub hi: u64,
    /// everything <= done_hi has been scanned
    pub done_hi: u64,
    /// hit lines: candidate plus its witness residues, already formatted
    pub hits: Vec<String>,
    pub elapsed_ms: u64,
}

impl HuntCheckpoint {
    pub fn payload(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "version: {}", self.version);
        let _ = writeln!(s, "kind: {}", self.kind);
        let _ = writeln!(s, "method: {}", self.method);
        let _ = writeln!(s, "lo: {}", self.lo);
        let _ = writeln!(s, "hi: {}", self.hi);
        let _ = writeln!(s, "done_hi: {}", self.done_hi);
        let _ = writeln!(s, "elapsed_ms: {}", self.elapsed_ms);
        for h in &self.hits {
            let _ = writeln!(s, "hit: {h}");
        }
        s
    }

    pub fn to_text(&self) -> String {
        let payload = self.payload();
        let digest = hex_digest(&payload);
        format!("{payload}digest: {digest}\n")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut version = None;
        let mut kind = None;
        let mut method = None;
        let mut lo = None;
        let mut hi = None;
        let mut done_hi = None;
        let mut elapsed_ms = 0;
        let mut hits = Vec::new();
        let mut digest_line = None;
        let mut payload = String::new();
        for line in text.lines() {
            let Some((key, value)) = line.split_once(": ") else {
                return Err(Error::CheckpointFormat(format!("malformed line `{line}`")));
            };
            if key == "digest" {
                digest_line = Some(value.to_string());
                continue;
            }
            payload.push_str(line);
            payload.push('\n');
            match key {
                "version" => version = value.parse().ok(),
                "kind" => kind = Some(value.to_string()),
                "method" => method = Some(value.to_string()),
                "lo" => lo = value.parse().ok(),
                "hi" => hi = value.parse().ok(),
                "done_hi" => done_hi = value.parse().ok(),
                "elapsed_ms" => elapsed_ms = value.parse().unwrap_or(0),
                "hit" => hits.push(value.to_string()),
                other => {
                    return Err(Error::CheckpointFormat(format!("unknown field `{other}`")));
                }
            }
        }
        let digest = digest_line
            .ok_or_else(|| Error::CheckpointFormat("missing digest".into()))?;
        let expect = hex_digest(&payload);
        if digest != expect {
            return Err(Error::CheckpointFormat(format!(
                "digest mismatch: file has {digest}, payload hashes to {expect}"
            )));
        }
        let version = version.ok_or_else(|| Error::CheckpointFormat("missing version".into()))?;
        if version != CHECKPOINT_VERSION {
            return Err(Error::CheckpointFormat(format!("unsupported version {version}")));
        }
        Ok(HuntCheckpoint {
            version,
            kind: kind.ok_or_else(|| Error::CheckpointFormat("missing kind".into()))?,
            method: method.ok_or_else(|| Error::CheckpointFormat("missing method".into()))?,
            lo: lo.ok_or_else(|| Error::CheckpointFormat("missing lo".into()))?,
            hi: hi.ok_or_else(|| Error::CheckpointFormat("missing hi".into()))?,
            done_hi: done_hi.ok_or_else(|| Error::CheckpointFormat("missing done_hi".into()))?,
            hits,
            elapsed_ms,
        })
    }

    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_text())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }
}

fn hex_digest(payload: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(payload.as_bytes());
    let out = hasher.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        let _ = write!(s, "{b:02x}");
    }
    s
}
