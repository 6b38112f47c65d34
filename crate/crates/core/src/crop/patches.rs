//! Patch-grid layout, extraction, and sensor-plane cell labels.

use rand::Rng;

use super::rect::{round_half_up, CropRect};
use crate::error::{Error, Result};
use crate::image::ImageBuffer;
use crate::scalar::Scalar;

pub const PATCH_SIZE: usize = 96;
pub const GRID_SIZE: usize = 4;
pub const NUM_PATCHES: usize = GRID_SIZE * GRID_SIZE;
pub const MAX_JITTER: i64 = 8;
pub const MIN_PATCH_SOURCE_WIDTH: usize = 1024;
pub const MIN_PATCH_SOURCE_HEIGHT: usize = PATCH_SIZE + 2 * MAX_JITTER as usize;

/// Grid slot `k` sits at column `k % 4`, row `k / 4`.
pub fn slot_position(slot: usize) -> (usize, usize) {
    (slot % GRID_SIZE, slot / GRID_SIZE)
}

fn check_source(width: usize, height: usize) -> Result<()> {
    if width < MIN_PATCH_SOURCE_WIDTH || height < MIN_PATCH_SOURCE_HEIGHT {
        return Err(Error::Argument(format!(
            "patch source must be at least {MIN_PATCH_SOURCE_WIDTH}x{MIN_PATCH_SOURCE_HEIGHT}, got {width}x{height}"
        )));
    }
    Ok(())
}

/// Regular 4x4 grid of patch centers with up to `max_jitter` pixels of
/// independent integer jitter per axis, clamped so every patch fits.
pub fn patch_grid_centers_with_jitter<R: Rng + ?Sized>(
    width: usize,
    height: usize,
    max_jitter: i64,
    rng: &mut R,
) -> Result<[(f64, f64); NUM_PATCHES]> {
    check_source(width, height)?;
    let half = (PATCH_SIZE / 2) as f64;
    let (w, h) = (width as f64, height as f64);
    let mut centers = [(0.0, 0.0); NUM_PATCHES];
    for (slot, center) in centers.iter_mut().enumerate() {
        let (i, j) = slot_position(slot);
        let (jx, jy) = if max_jitter > 0 {
            (
                rng.random_range(-max_jitter..=max_jitter),
                rng.random_range(-max_jitter..=max_jitter),
            )
        } else {
            (0, 0)
        };
        let cx = (i as f64 + 0.5) * w / GRID_SIZE as f64 + jx as f64;
        let cy = (j as f64 + 0.5) * h / GRID_SIZE as f64 + jy as f64;
        *center = (cx.clamp(half, w - half), cy.clamp(half, h - half));
    }
    Ok(centers)
}

/// [`patch_grid_centers_with_jitter`] with the standard ±8 px jitter.
pub fn patch_grid_centers<R: Rng + ?Sized>(
    width: usize,
    height: usize,
    rng: &mut R,
) -> Result<[(f64, f64); NUM_PATCHES]> {
    patch_grid_centers_with_jitter(width, height, MAX_JITTER, rng)
}

/// Sensor-plane cell of a patch centered at `center` (pixels) in a
/// `dims`-sized frame that covers `rect` of the sensor.
pub fn patch_label(center: (f64, f64), dims: (usize, usize), rect: &CropRect) -> u8 {
    let (u, v) = rect.to_sensor(center.0 / dims.0 as f64, center.1 / dims.1 as f64);
    let cell = |t: f64| ((GRID_SIZE as f64 * t).floor().max(0.0) as usize).min(GRID_SIZE - 1);
    (GRID_SIZE * cell(v) + cell(u)) as u8
}

/// Sixteen patches plus the geometry needed to label them.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchSet<T> {
    pub patches: Vec<ImageBuffer<T>>,
    /// Centers of the extracted pixel windows.
    pub centers_px: [(f64, f64); NUM_PATCHES],
    pub labels: [u8; NUM_PATCHES],
    pub grid_slots: [u8; NUM_PATCHES],
}

/// Snap each requested center to a whole-pixel 96x96 window, cut it out, and
/// label it by the window's true center.
pub fn extract_patches<T: Scalar>(
    img: &ImageBuffer<T>,
    centers: &[(f64, f64); NUM_PATCHES],
    rect: &CropRect,
) -> Result<PatchSet<T>> {
    let (w, h) = img.dims();
    check_source(w, h)?;
    let half = (PATCH_SIZE / 2) as f64;
    let mut origins = [(0usize, 0usize); NUM_PATCHES];
    for (o, &(cx, cy)) in origins.iter_mut().zip(centers) {
        let left = round_half_up(cx - half).clamp(0, (w - PATCH_SIZE) as i64) as usize;
        let top = round_half_up(cy - half).clamp(0, (h - PATCH_SIZE) as i64) as usize;
        *o = (left, top);
    }
    for a in 0..NUM_PATCHES {
        for b in a + 1..NUM_PATCHES {
            let (ax, ay) = origins[a];
            let (bx, by) = origins[b];
            if ax.abs_diff(bx) < PATCH_SIZE && ay.abs_diff(by) < PATCH_SIZE {
                return Err(Error::PatchOverlap { a, b });
            }
        }
    }
    let mut patches = Vec::with_capacity(NUM_PATCHES);
    let mut centers_px = [(0.0, 0.0); NUM_PATCHES];
    let mut labels = [0u8; NUM_PATCHES];
    let mut grid_slots = [0u8; NUM_PATCHES];
    for (slot, &(left, top)) in origins.iter().enumerate() {
        patches.push(img.region(left, top, PATCH_SIZE, PATCH_SIZE)?);
        let center = (left as f64 + half, top as f64 + half);
        centers_px[slot] = center;
        labels[slot] = patch_label(center, (w, h), rect);
        grid_slots[slot] = slot as u8;
    }
    Ok(PatchSet {
        patches,
        centers_px,
        labels,
        grid_slots,
    })
}
