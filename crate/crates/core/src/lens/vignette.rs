use serde::{Deserialize, Serialize};

use super::OpticalFrame;
use crate::error::{Error, Result};
use crate::image::ImageBuffer;
use crate::scalar::Scalar;

/// Coefficients of the radial gain `g(r) = 1 + a r^2 + b r^4 + c r^6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VignetteParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl VignetteParams {
    /// Typical falloff coefficients for a consumer lens.
    pub const TYPICAL: VignetteParams = VignetteParams {
        a: 2.0625,
        b: 8.75,
        c: 0.0313,
    };
}

impl Default for VignetteParams {
    fn default() -> Self {
        Self::TYPICAL
    }
}

pub fn vignette_gain(r: f64, params: VignetteParams) -> f64 {
    let r2 = r * r;
    1.0 + r2 * (params.a + r2 * (params.b + r2 * params.c))
}

/// Blend every pixel between its original value (`t = 0`) and the value
/// divided by `g(r)` (`t = 1`). `t > 1` extrapolates; results are clamped.
pub fn apply_vignetting<T: Scalar>(
    img: &ImageBuffer<T>,
    t: f64,
    params: VignetteParams,
) -> Result<ImageBuffer<T>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Argument(format!(
            "vignette strength must be >= 0, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(img.clone());
    }
    let frame = OpticalFrame::centered(img.width(), img.height());
    Ok(img.map_pixels(|x, y, px| {
        let g = vignette_gain(frame.pixel_radius(x, y), params);
        let factor = T::from_f64_lossy((1.0 - t) + t / g);
        px.map(|v| v * factor)
    }))
}
