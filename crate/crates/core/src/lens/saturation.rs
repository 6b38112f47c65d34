use crate::error::{Error, Result};
use crate::image::{luma_of, ImageBuffer};
use crate::scalar::Scalar;

/// Scale chroma around Rec.601 luma: `out = y + s (in - y)`.
pub fn apply_saturation<T: Scalar>(img: &ImageBuffer<T>, s: f64) -> Result<ImageBuffer<T>> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::Argument(format!("saturation must be >= 0, got {s}")));
    }
    if s == 1.0 {
        return Ok(img.clone());
    }
    let s = T::from_f64_lossy(s);
    Ok(img.map_pixels(|_, _, px| {
        let y = luma_of(px);
        px.map(|v| y + s * (v - y))
    }))
}
