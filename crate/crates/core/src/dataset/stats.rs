//! Summary statistics of a generated dataset, read back from disk.

use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::generate::{list_samples, EdgeCounts, META_FILE};
use super::json::read_json;
use crate::crop::{patch_label, SampleMeta, NUM_PATCHES, SIZE_FACTOR_RANGE};
use crate::error::{Error, Result};

pub const SIZE_FACTOR_BINS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptRecord {
    pub sample_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub records: usize,
    pub cropped: usize,
    pub crop_rate: f64,
    /// Lower edges of the size-factor bins; the last bin is closed.
    pub size_factor_bin_edges: Vec<f64>,
    pub size_factor_histogram: Vec<usize>,
    pub label_histogram: [usize; NUM_PATCHES],
    pub pinned_edges: EdgeCounts,
    /// Chi-squared test of the pinned edges against a uniform split; absent
    /// without cropped records.
    pub pinned_edge_p_value: Option<f64>,
    /// Records whose stored labels disagree with the stored geometry.
    pub label_mismatches: Vec<String>,
    pub corrupt: Vec<CorruptRecord>,
}

/// Upper-tail p-value of Pearson's chi-squared statistic against equal
/// expected counts.
pub fn uniform_chi2_p_value(counts: &[usize]) -> Option<f64> {
    let n: usize = counts.iter().sum();
    if counts.len() < 2 || n == 0 {
        return None;
    }
    let expected = n as f64 / counts.len() as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).ok()?;
    Some(dist.sf(stat))
}

fn size_factor_bin(f: f64) -> usize {
    let (lo, hi) = SIZE_FACTOR_RANGE;
    (((f - lo) / (hi - lo) * SIZE_FACTOR_BINS as f64)
        .floor()
        .max(0.0) as usize)
        .min(SIZE_FACTOR_BINS - 1)
}

fn labels_consistent(meta: &SampleMeta) -> bool {
    let dims = (meta.patch_frame_px[0], meta.patch_frame_px[1]);
    meta.patch_centers_px
        .iter()
        .zip(&meta.patch_labels)
        .all(|(&[x, y], &l)| patch_label((x, y), dims, &meta.crop_rect) == l)
}

/// Scan every record under `dataset_dir/samples`. Unreadable records are
/// listed rather than fatal; a dataset without any record is an error.
pub fn stats(dataset_dir: &Path) -> Result<DatasetStats> {
    let samples = list_samples(dataset_dir)?;
    if samples.is_empty() {
        return Err(Error::EmptyDataset(dataset_dir.to_path_buf()));
    }
    let (lo, hi) = SIZE_FACTOR_RANGE;
    let mut s = DatasetStats {
        records: 0,
        cropped: 0,
        crop_rate: 0.0,
        size_factor_bin_edges: (0..SIZE_FACTOR_BINS)
            .map(|i| lo + (hi - lo) * i as f64 / SIZE_FACTOR_BINS as f64)
            .collect(),
        size_factor_histogram: vec![0; SIZE_FACTOR_BINS],
        label_histogram: [0; NUM_PATCHES],
        pinned_edges: EdgeCounts::default(),
        pinned_edge_p_value: None,
        label_mismatches: Vec::new(),
        corrupt: Vec::new(),
    };
    for (id, dir) in samples {
        let meta: SampleMeta = match read_json(&dir.join(META_FILE)) {
            Ok(m) => m,
            Err(e) => {
                s.corrupt.push(CorruptRecord {
                    sample_id: id,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        if meta.patch_labels.iter().any(|&l| l as usize >= NUM_PATCHES)
            || meta.patch_frame_px.contains(&0)
            || meta.crop_rect.validate().is_err()
        {
            s.corrupt.push(CorruptRecord {
                sample_id: id,
                reason: "inconsistent meta".into(),
            });
            continue;
        }
        s.records += 1;
        if meta.cropped {
            s.cropped += 1;
            s.size_factor_histogram[size_factor_bin(meta.size_factor)] += 1;
        }
        if let Some(e) = meta.pinned_edge {
            s.pinned_edges.add(e);
        }
        for &l in &meta.patch_labels {
            s.label_histogram[l as usize] += 1;
        }
        if !labels_consistent(&meta) {
            s.label_mismatches.push(id);
        }
    }
    if s.records > 0 {
        s.crop_rate = s.cropped as f64 / s.records as f64;
    }
    s.pinned_edge_p_value = uniform_chi2_p_value(&s.pinned_edges.as_array());
    Ok(s)
}
