//! Manifest types and their JSON-lines form.
//!
//! The file starts with one header line (`"kind": "header"`) carrying the
//! master seed, config digest and corpus root, followed by one
//! `"kind": "entry"` line per accepted image, sorted by source path.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::json::to_line;
use crate::error::{Error, Result};
use crate::image::BitDepth;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rotation {
    None,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Path relative to the corpus root, `/`-separated.
    pub source_path: String,
    /// Dimensions after orientation and downscaling.
    pub width: usize,
    pub height: usize,
    pub rotated: Rotation,
    pub split: Option<Split>,
    pub crop_assigned: bool,
    pub sample_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub master_seed: u64,
    pub config_digest: String,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Line {
    Header {
        root: String,
        master_seed: u64,
        config_digest: String,
    },
    Entry(ManifestEntry),
}

impl DatasetManifest {
    pub fn to_jsonl(&self) -> String {
        let mut out = to_line(&Line::Header {
            root: self.root.to_string_lossy().into_owned(),
            master_seed: self.master_seed,
            config_digest: self.config_digest.clone(),
        });
        out.push('\n');
        for e in &self.entries {
            out.push_str(&to_line(&Line::Entry(e.clone())));
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(self.to_jsonl().as_bytes())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_jsonl()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut header = None;
        let mut entries = Vec::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Line>(&line).map_err(|e| Error::json(path, e))? {
                Line::Header {
                    root,
                    master_seed,
                    config_digest,
                } => {
                    if header.is_some() || n != 0 {
                        return Err(Error::Argument(format!(
                            "{}: header must appear once, on the first line",
                            path.display()
                        )));
                    }
                    header = Some((root, master_seed, config_digest));
                }
                Line::Entry(e) => entries.push(e),
            }
        }
        let (root, master_seed, config_digest) = header.ok_or_else(|| {
            Error::Argument(format!("{}: missing manifest header", path.display()))
        })?;
        Ok(DatasetManifest {
            root: PathBuf::from(root),
            master_seed,
            config_digest,
            entries,
        })
    }

    pub fn split_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for e in &self.entries {
            if let Some(s) = e.split {
                counts[s as usize] += 1;
            }
        }
        counts
    }
}

/// Corpus admission and encoding settings. Its digest is recorded in every
/// manifest and summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenerationConfig {
    pub aspect_ratio: f64,
    pub aspect_tolerance: f64,
    pub max_dimension: usize,
    pub min_width: usize,
    pub split_fractions: [f64; 3],
    pub bit_depth: BitDepth,
    pub debug_provenance: bool,
    /// Fraction of failed samples that aborts a run.
    pub failure_budget: f64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            aspect_ratio: 1.5,
            aspect_tolerance: 0.002,
            max_dimension: 2048,
            min_width: 1024,
            split_fractions: [0.9, 0.05, 0.05],
            bit_depth: BitDepth::Eight,
            debug_provenance: false,
            failure_budget: 0.01,
        }
    }
}

/// Hex SHA-256 of a value's canonical JSON line.
pub fn digest_of<S: Serialize>(value: &S) -> String {
    let digest = Sha256::digest(to_line(value).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl GenerationConfig {
    pub fn digest(&self) -> String {
        digest_of(self)
    }
}
