//! Synthetic lens aberrations applied to full-sensor images.
//!
//! Radii are measured from the optical center (the image center unless
//! overridden) and normalized by the half diagonal, so `r = 1` at every
//! corner and both axes share one scale.

mod distortion;
mod saturation;
mod tca;
mod vignette;

use serde::{Deserialize, Serialize};

pub use distortion::{
    apply_radial_distortion, check_distortion_coefficient, correct_radial_distortion,
    distort_radius, undistort_radius, undistortion_map, DISTORTION_MAX_ITERATIONS,
    DISTORTION_TOLERANCE,
};
pub use saturation::apply_saturation;
pub use tca::apply_tca;
pub use vignette::{apply_vignetting, vignette_gain, VignetteParams};

use crate::error::{Error, Result};
use crate::image::ImageBuffer;
use crate::scalar::Scalar;

/// Continuous coordinate frame centered on the optical axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalFrame {
    pub cx: f64,
    pub cy: f64,
    pub half_diagonal: f64,
}

impl OpticalFrame {
    pub fn centered(width: usize, height: usize) -> Self {
        let (w, h) = (width as f64, height as f64);
        OpticalFrame {
            cx: w / 2.0,
            cy: h / 2.0,
            half_diagonal: 0.5 * (w * w + h * h).sqrt(),
        }
    }

    /// Normalized offset of a continuous pixel position from the center.
    #[inline]
    pub fn normalize(&self, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.cx) / self.half_diagonal,
            (y - self.cy) / self.half_diagonal,
        )
    }

    #[inline]
    pub fn denormalize(&self, u: f64, v: f64) -> (f64, f64) {
        (
            self.cx + u * self.half_diagonal,
            self.cy + v * self.half_diagonal,
        )
    }

    /// Normalized radius of the center of pixel `(col, row)`.
    #[inline]
    pub fn pixel_radius(&self, col: usize, row: usize) -> f64 {
        let (u, v) = self.normalize(col as f64 + 0.5, row as f64 + 0.5);
        u.hypot(v)
    }
}

pub const TCA_SCALE_RANGE: (f64, f64) = (0.99, 1.01);
pub const VIGNETTE_STRENGTH_RANGE: (f64, f64) = (0.0, 1.5);
pub const DISTORTION_K1_RANGE: (f64, f64) = (-0.2, 0.2);

/// Processing stages of [`apply_profile`], in application order: geometry
/// first, then photometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    RadialDistortion,
    ChromaticAberration,
    Vignetting,
    Saturation,
}

pub const COMPOSITION_ORDER: [Stage; 4] = [
    Stage::RadialDistortion,
    Stage::ChromaticAberration,
    Stage::Vignetting,
    Stage::Saturation,
];

/// Strengths of every simulated aberration. [`AberrationProfile::neutral`]
/// leaves images untouched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AberrationProfile {
    /// Per-channel magnification `(s_R, s_G, s_B)` about the optical center.
    pub tca_scale: [f64; 3],
    /// Vignetting interpolation weight: 0 = off, 1 = full falloff.
    pub vignette_strength: f64,
    pub vignette_params: VignetteParams,
    pub distortion_k1: f64,
    /// 0 = grayscale, 1 = identity.
    pub saturation: f64,
}

impl Default for AberrationProfile {
    fn default() -> Self {
        Self::neutral()
    }
}

impl AberrationProfile {
    pub const fn neutral() -> Self {
        AberrationProfile {
            tca_scale: [1.0; 3],
            vignette_strength: 0.0,
            vignette_params: VignetteParams::TYPICAL,
            distortion_k1: 0.0,
            saturation: 1.0,
        }
    }

    pub fn is_neutral(&self) -> bool {
        self.tca_scale == [1.0; 3]
            && self.vignette_strength == 0.0
            && self.distortion_k1 == 0.0
            && self.saturation == 1.0
    }

    pub fn validate(&self) -> Result<()> {
        let in_range = |v: f64, (lo, hi): (f64, f64)| v.is_finite() && v >= lo && v <= hi;
        for (c, &s) in self.tca_scale.iter().enumerate() {
            if !in_range(s, TCA_SCALE_RANGE) {
                return Err(Error::Argument(format!(
                    "tca scale for channel {c} is {s}, outside [{}, {}]",
                    TCA_SCALE_RANGE.0, TCA_SCALE_RANGE.1
                )));
            }
        }
        if !in_range(self.vignette_strength, VIGNETTE_STRENGTH_RANGE) {
            return Err(Error::Argument(format!(
                "vignette strength {} outside [{}, {}]",
                self.vignette_strength, VIGNETTE_STRENGTH_RANGE.0, VIGNETTE_STRENGTH_RANGE.1
            )));
        }
        let VignetteParams { a, b, c } = self.vignette_params;
        if ![a, b, c].iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(Error::Argument(format!(
                "vignette coefficients must be finite and non-negative, got ({a}, {b}, {c})"
            )));
        }
        if !in_range(self.distortion_k1, DISTORTION_K1_RANGE) {
            return Err(Error::Argument(format!(
                "distortion k1 {} outside [{}, {}]",
                self.distortion_k1, DISTORTION_K1_RANGE.0, DISTORTION_K1_RANGE.1
            )));
        }
        check_distortion_coefficient(self.distortion_k1)?;
        if !(self.saturation.is_finite() && self.saturation >= 0.0) {
            return Err(Error::Argument(format!(
                "saturation must be finite and non-negative, got {}",
                self.saturation
            )));
        }
        Ok(())
    }
}

/// Apply every stage of `profile` in [`COMPOSITION_ORDER`].
pub fn apply_profile<T: Scalar>(
    img: &ImageBuffer<T>,
    profile: &AberrationProfile,
) -> Result<ImageBuffer<T>> {
    profile.validate()?;
    let mut out = img.clone();
    for stage in COMPOSITION_ORDER {
        out = match stage {
            Stage::RadialDistortion => apply_radial_distortion(&out, profile.distortion_k1)?,
            Stage::ChromaticAberration => apply_tca(&out, profile.tca_scale, None)?,
            Stage::Vignetting => {
                apply_vignetting(&out, profile.vignette_strength, profile.vignette_params)?
            }
            Stage::Saturation => apply_saturation(&out, profile.saturation)?,
        };
    }
    Ok(out)
}
