use serde::{Deserialize, Serialize};

use super::patches::{extract_patches, patch_grid_centers, NUM_PATCHES};
use super::rect::{apply_crop, sample_crop, CropRect, Edge};
use super::resize_chain::{make_thumbnail, pre_patch_resize, Thumbnail};
use crate::error::Result;
use crate::image::ImageBuffer;
use crate::lens::{apply_profile, AberrationProfile};
use crate::rng::{rng_for, Stream};
use crate::scalar::Scalar;

/// Source geometry, recorded only when provenance debugging is enabled
/// because it reveals the original resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source_path: String,
    pub source_width: usize,
    pub source_height: usize,
    pub cropped_width: usize,
    pub cropped_height: usize,
}

/// Everything about a sample except its pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub cropped: bool,
    pub crop_rect: CropRect,
    pub size_factor: f64,
    pub pinned_edge: Option<Edge>,
    pub patch_labels: [u8; NUM_PATCHES],
    pub grid_slots: [u8; NUM_PATCHES],
    pub patch_centers_px: [[f64; 2]; NUM_PATCHES],
    /// Dimensions of the randomly resized frame the patches were cut from.
    pub patch_frame_px: [usize; 2],
    pub aberration_profile: AberrationProfile,
    pub sample_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord<T> {
    pub thumbnail: Thumbnail<T>,
    /// Patches in grid-slot order.
    pub patches: Vec<ImageBuffer<T>>,
    pub meta: SampleMeta,
}

/// Turn one full-sensor image into a training sample.
///
/// Aberrations go first, then the optional crop. The cropped frame feeds two
/// branches: a random pre-patch resize followed by jittered grid extraction,
/// and the triple fuzz resize down to the thumbnail. All randomness comes
/// from `seed`, so equal inputs give identical records.
pub fn prepare_sample<T: Scalar>(
    img: &ImageBuffer<T>,
    crop_flag: bool,
    profile: &AberrationProfile,
    seed: u64,
) -> Result<SampleRecord<T>> {
    let mut rng = rng_for(seed, Stream::Sample);
    let aberrated = apply_profile(img, profile)?;
    let (rect, size_factor, pinned_edge) = if crop_flag {
        let pinned = sample_crop(&mut rng);
        (pinned.rect, pinned.size_factor, Some(pinned.edge))
    } else {
        (CropRect::FULL, 1.0, None)
    };
    let cropped = apply_crop(&aberrated, &rect)?;

    let resized = pre_patch_resize(&cropped, &mut rng)?;
    let centers = patch_grid_centers(resized.width(), resized.height(), &mut rng)?;
    let set = extract_patches(&resized, &centers, &rect)?;

    let thumbnail = make_thumbnail(&cropped, &mut rng)?;

    let meta = SampleMeta {
        cropped: crop_flag,
        crop_rect: rect,
        size_factor,
        pinned_edge,
        patch_labels: set.labels,
        grid_slots: set.grid_slots,
        patch_centers_px: set.centers_px.map(|(x, y)| [x, y]),
        patch_frame_px: [resized.width(), resized.height()],
        aberration_profile: *profile,
        sample_seed: seed,
        provenance: None,
    };
    Ok(SampleRecord {
        thumbnail,
        patches: set.patches,
        meta,
    })
}
