//! Parallel dataset generation with deterministic, resumable output.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::json::{read_json, to_pretty_bytes, write_pretty};
use super::manifest::{digest_of, DatasetManifest, ManifestEntry, Split};
use super::scan::load_entry_image;
use crate::crop::{crop_bounds, prepare_sample, Edge, Provenance, SampleMeta, NUM_PATCHES};
use crate::error::{Error, Result};
use crate::image::{encode_png, BitDepth};
use crate::lens::AberrationProfile;

pub const SAMPLES_DIR: &str = "samples";
pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";
pub const META_FILE: &str = "meta.json";
pub const THUMB_FILE: &str = "thumb.png";

pub fn patch_file(slot: usize) -> String {
    format!("patch_{slot:02}.png")
}

pub fn sample_id(index: usize) -> String {
    format!("{index:06}")
}

#[derive(Debug, Clone)]
pub struct GenerateOptions {
    /// Worker threads; 0 uses all cores. Output does not depend on it.
    pub workers: usize,
    pub bit_depth: BitDepth,
    pub resume: bool,
    pub debug_provenance: bool,
    pub failure_budget: f64,
    /// Set from outside (e.g. a signal handler) to stop scheduling samples.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions {
            workers: 0,
            bit_depth: BitDepth::Eight,
            resume: false,
            debug_provenance: false,
            failure_budget: 0.01,
            cancel: None,
        }
    }
}

/// Encoded files of one sample, ready to be written.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedRecord {
    pub meta: SampleMeta,
    pub files: Vec<(String, Vec<u8>)>,
}

/// Produce the on-disk form of one manifest entry.
pub fn render_record(
    root: &Path,
    entry: &ManifestEntry,
    profile: &AberrationProfile,
    bit_depth: BitDepth,
    debug_provenance: bool,
) -> Result<RenderedRecord> {
    let img = load_entry_image(root, entry)?;
    let record = prepare_sample(&img, entry.crop_assigned, profile, entry.sample_seed)?;
    let mut meta = record.meta;
    if debug_provenance {
        let (x0, x1, y0, y1) = crop_bounds(entry.width, entry.height, &meta.crop_rect)?;
        meta.provenance = Some(Provenance {
            source_path: entry.source_path.clone(),
            source_width: entry.width,
            source_height: entry.height,
            cropped_width: x1 - x0,
            cropped_height: y1 - y0,
        });
    }
    let mut files = Vec::with_capacity(NUM_PATCHES + 2);
    files.push((
        THUMB_FILE.to_string(),
        encode_png(&record.thumbnail.rgb, bit_depth)?,
    ));
    for (slot, patch) in record.patches.iter().enumerate() {
        files.push((patch_file(slot), encode_png(patch, bit_depth)?));
    }
    files.push((META_FILE.to_string(), to_pretty_bytes(&meta)));
    Ok(RenderedRecord { meta, files })
}

fn write_record(samples: &Path, id: &str, rendered: &RenderedRecord) -> Result<()> {
    let partial = samples.join(format!(".{id}.partial"));
    let final_dir = samples.join(id);
    if partial.exists() {
        std::fs::remove_dir_all(&partial).map_err(|e| Error::io(&partial, e))?;
    }
    std::fs::create_dir_all(&partial).map_err(|e| Error::io(&partial, e))?;
    for (name, bytes) in &rendered.files {
        let p = partial.join(name);
        std::fs::write(&p, bytes).map_err(|e| Error::io(&p, e))?;
    }
    std::fs::rename(&partial, &final_dir).map_err(|e| Error::io(&final_dir, e))
}

fn is_complete(samples: &Path, id: &str) -> bool {
    samples.join(id).join(META_FILE).is_file()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCounts {
    pub top: usize,
    pub right: usize,
    pub bottom: usize,
    pub left: usize,
}

impl EdgeCounts {
    pub fn add(&mut self, edge: Edge) {
        match edge {
            Edge::Top => self.top += 1,
            Edge::Right => self.right += 1,
            Edge::Bottom => self.bottom += 1,
            Edge::Left => self.left += 1,
        }
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.top, self.right, self.bottom, self.left]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedSample {
    pub sample_id: String,
    pub source_path: String,
    pub error: String,
}

/// Written to `summary.json` after a complete run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSummary {
    pub master_seed: u64,
    pub config_digest: String,
    pub run_digest: String,
    pub aberration_profile: AberrationProfile,
    pub bit_depth: BitDepth,
    pub entries: usize,
    pub records: usize,
    pub cropped: usize,
    pub uncropped: usize,
    pub splits: SplitCounts,
    pub label_histogram: [usize; NUM_PATCHES],
    pub label_histogram_uncropped: [usize; NUM_PATCHES],
    pub label_histogram_cropped: [usize; NUM_PATCHES],
    pub pinned_edges: EdgeCounts,
    pub failures: Vec<FailedSample>,
}

#[derive(Serialize)]
struct RunKey<'a> {
    config_digest: &'a str,
    master_seed: u64,
    profile: &'a AberrationProfile,
    bit_depth: BitDepth,
    debug_provenance: bool,
}

enum Outcome {
    Done,
    Failed(String),
    NotRun,
}

/// Render every manifest entry into `out_dir/samples/<id>/` and write the
/// manifest copy and `summary.json`.
///
/// Samples are independent: each draws only from its own seed, and the
/// summary is assembled from the records on disk in manifest order, so the
/// output bytes do not depend on the worker count or on interruptions
/// followed by `resume`.
pub fn generate(
    manifest: &DatasetManifest,
    profile: &AberrationProfile,
    out_dir: &Path,
    options: &GenerateOptions,
) -> Result<GenerationSummary> {
    profile.validate()?;
    if manifest.entries.is_empty() {
        return Err(Error::EmptyCorpus(manifest.root.clone()));
    }
    let samples = out_dir.join(SAMPLES_DIR);
    let manifest_path = out_dir.join(MANIFEST_FILE);
    let manifest_text = manifest.to_jsonl();
    if options.resume {
        if let Ok(existing) = std::fs::read_to_string(&manifest_path) {
            if existing != manifest_text {
                return Err(Error::Argument(format!(
                    "{} holds a different manifest; refusing to resume",
                    manifest_path.display()
                )));
            }
        }
    } else if samples.is_dir()
        && std::fs::read_dir(&samples)
            .map_err(|e| Error::io(&samples, e))?
            .next()
            .is_some()
    {
        return Err(Error::Argument(format!(
            "{} is not empty; pass resume or choose a fresh output directory",
            samples.display()
        )));
    }
    std::fs::create_dir_all(&samples).map_err(|e| Error::io(&samples, e))?;
    std::fs::write(&manifest_path, &manifest_text).map_err(|e| Error::io(&manifest_path, e))?;

    let total = manifest.entries.len();
    let failed = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let cancelled = || {
        options
            .cancel
            .as_ref()
            .is_some_and(|c| c.load(Ordering::SeqCst))
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| Error::Argument(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        manifest
            .entries
            .par_iter()
            .enumerate()
            .map(|(index, entry)| {
                let id = sample_id(index);
                if is_complete(&samples, &id) {
                    return Outcome::Done;
                }
                if abort.load(Ordering::SeqCst) || cancelled() {
                    return Outcome::NotRun;
                }
                let result = render_record(
                    &manifest.root,
                    entry,
                    profile,
                    options.bit_depth,
                    options.debug_provenance,
                )
                .and_then(|r| write_record(&samples, &id, &r));
                match result {
                    Ok(()) => Outcome::Done,
                    Err(e) => {
                        warn!("sample {id} ({}) failed: {e}", entry.source_path);
                        let n = failed.fetch_add(1, Ordering::SeqCst) + 1;
                        if n as f64 > options.failure_budget * total as f64 {
                            abort.store(true, Ordering::SeqCst);
                        }
                        Outcome::Failed(e.to_string())
                    }
                }
            })
            .collect()
    });

    let n_failed = failed.load(Ordering::SeqCst);
    if abort.load(Ordering::SeqCst) {
        return Err(Error::FailureBudget {
            failed: n_failed,
            total,
        });
    }
    if outcomes.iter().any(|o| matches!(o, Outcome::NotRun)) {
        return Err(Error::Cancelled);
    }

    let mut summary = GenerationSummary {
        master_seed: manifest.master_seed,
        config_digest: manifest.config_digest.clone(),
        run_digest: digest_of(&RunKey {
            config_digest: &manifest.config_digest,
            master_seed: manifest.master_seed,
            profile,
            bit_depth: options.bit_depth,
            debug_provenance: options.debug_provenance,
        }),
        aberration_profile: *profile,
        bit_depth: options.bit_depth,
        entries: total,
        records: 0,
        cropped: 0,
        uncropped: 0,
        splits: SplitCounts::default(),
        label_histogram: [0; NUM_PATCHES],
        label_histogram_uncropped: [0; NUM_PATCHES],
        label_histogram_cropped: [0; NUM_PATCHES],
        pinned_edges: EdgeCounts::default(),
        failures: Vec::new(),
    };
    for (index, (entry, outcome)) in manifest.entries.iter().zip(&outcomes).enumerate() {
        let id = sample_id(index);
        if let Outcome::Failed(error) = outcome {
            summary.failures.push(FailedSample {
                sample_id: id,
                source_path: entry.source_path.clone(),
                error: error.clone(),
            });
            continue;
        }
        let meta: SampleMeta = read_json(&samples.join(&id).join(META_FILE))?;
        summary.records += 1;
        match entry.split {
            Some(Split::Train) => summary.splits.train += 1,
            Some(Split::Val) => summary.splits.val += 1,
            Some(Split::Test) => summary.splits.test += 1,
            None => {}
        }
        let by_crop = if meta.cropped {
            summary.cropped += 1;
            &mut summary.label_histogram_cropped
        } else {
            summary.uncropped += 1;
            &mut summary.label_histogram_uncropped
        };
        for &l in &meta.patch_labels {
            by_crop[l as usize] += 1;
        }
        for &l in &meta.patch_labels {
            summary.label_histogram[l as usize] += 1;
        }
        if let Some(edge) = meta.pinned_edge {
            summary.pinned_edges.add(edge);
        }
    }
    write_pretty(&out_dir.join(SUMMARY_FILE), &summary)?;
    info!(
        "generated {} records ({} cropped, {} failed) in {}",
        summary.records,
        summary.cropped,
        summary.failures.len(),
        out_dir.display()
    );
    Ok(summary)
}

/// Sample directories of a generated dataset, in id order.
pub fn list_samples(dataset_dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    let samples = dataset_dir.join(SAMPLES_DIR);
    let mut out: Vec<(String, PathBuf)> = std::fs::read_dir(&samples)
        .map_err(|e| Error::io(&samples, e))?
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .filter_map(|e| {
            let name = e.file_name().to_string_lossy().into_owned();
            (!name.starts_with('.')).then(|| (name, e.path()))
        })
        .collect();
    out.sort();
    Ok(out)
}
