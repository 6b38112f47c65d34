//! Corpus ingestion, split assignment, dataset generation and the on-disk
//! formats shared with the training side.

mod batches;
mod generate;
pub mod json;
mod manifest;
mod scan;
mod splits;
mod stats;
mod sweep;

pub use batches::{assemble_pretext_batches, slot_histogram, PatchRef};
pub use generate::{
    generate, list_samples, patch_file, render_record, sample_id, EdgeCounts, FailedSample,
    GenerateOptions, GenerationSummary, RenderedRecord, SplitCounts, MANIFEST_FILE, META_FILE,
    SAMPLES_DIR, SUMMARY_FILE, THUMB_FILE,
};
pub use manifest::{digest_of, DatasetManifest, GenerationConfig, ManifestEntry, Rotation, Split};
pub use scan::{admit, load_entry_image, scan_and_filter, Admission, Rejection};
pub use splits::{assign_splits, split_sizes};
pub use stats::{stats, uniform_chi2_p_value, CorruptRecord, DatasetStats, SIZE_FACTOR_BINS};
pub use sweep::{sweep, sweep_dir_name, SweepAxis};
