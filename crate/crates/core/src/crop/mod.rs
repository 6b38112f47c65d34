//! From a full-sensor image to a model-ready sample: crop sampling, patch
//! grid extraction with sensor-plane labels, resolution-hiding resizes, and
//! thumbnails with coordinate channels.

mod patches;
mod rect;
mod resize_chain;
mod sample;

pub use patches::{
    extract_patches, patch_grid_centers, patch_grid_centers_with_jitter, patch_label,
    slot_position, PatchSet, GRID_SIZE, MAX_JITTER, MIN_PATCH_SOURCE_HEIGHT,
    MIN_PATCH_SOURCE_WIDTH, NUM_PATCHES, PATCH_SIZE,
};
pub use rect::{
    apply_crop, crop_bounds, sample_crop, sample_crop_rect, CropRect, Edge, PinnedCrop,
    SIZE_FACTOR_RANGE,
};
pub use resize_chain::{
    coordinate_planes, fuzz_resize_chain, make_thumbnail, pre_patch_resize, random_method,
    sample_fuzz_chain, sample_fuzz_step, sample_pre_patch_step, ResizeStep, Thumbnail,
    DATASET_ASPECT, FUZZ_HEIGHT_SPREAD, FUZZ_PASSES, RESIZE_WIDTH_RANGE, THUMBNAIL_HEIGHT,
    THUMBNAIL_WIDTH,
};
pub use sample::{prepare_sample, Provenance, SampleMeta, SampleRecord};
