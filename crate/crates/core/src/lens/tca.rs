use super::OpticalFrame;
use crate::error::{Error, Result};
use crate::image::{warp_channels, ImageBuffer};
use crate::scalar::Scalar;

/// Magnify each channel by its scale about `center` (default: image
/// center). A scale below one pulls the channel toward the center.
pub fn apply_tca<T: Scalar>(
    img: &ImageBuffer<T>,
    scales: [f64; 3],
    center: Option<(f64, f64)>,
) -> Result<ImageBuffer<T>> {
    if let Some(bad) = scales.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::Argument(format!(
            "tca scales must be positive, got {bad}"
        )));
    }
    if scales == [1.0; 3] {
        return Ok(img.clone());
    }
    let (cx, cy) = center.unwrap_or_else(|| {
        let f = OpticalFrame::centered(img.width(), img.height());
        (f.cx, f.cy)
    });
    let maps = scales.map(|s| move |x: f64, y: f64| (cx + (x - cx) / s, cy + (y - cy) / s));
    let pick = |c: usize| (scales[c] != 1.0).then_some(&maps[c]);
    warp_channels(img, [pick(0), pick(1), pick(2)])
}
