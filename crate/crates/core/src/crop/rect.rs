use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::ImageBuffer;
use crate::scalar::Scalar;

/// Inclusive range of the crop size factor `f`.
pub const SIZE_FACTOR_RANGE: (f64, f64) = (0.5, 0.9);

/// Relative crop boundaries inside the original sensor plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CropRect {
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
}

/// Sensor edge a sampled crop is pinned against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Top,
    Right,
    Bottom,
    Left,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Top, Edge::Right, Edge::Bottom, Edge::Left];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinnedCrop {
    pub rect: CropRect,
    pub edge: Edge,
    /// The drawn size factor; equals the rect extents up to rounding.
    pub size_factor: f64,
}

impl CropRect {
    /// The uncropped sentinel `(0, 1, 0, 1)`.
    pub const FULL: CropRect = CropRect {
        x1: 0.0,
        x2: 1.0,
        y1: 0.0,
        y2: 1.0,
    };

    pub fn new(x1: f64, x2: f64, y1: f64, y2: f64) -> Result<Self> {
        let rect = CropRect { x1, x2, y1, y2 };
        rect.validate()?;
        Ok(rect)
    }

    pub fn validate(&self) -> Result<()> {
        let CropRect { x1, x2, y1, y2 } = *self;
        let ordered =
            |a: f64, b: f64| a.is_finite() && b.is_finite() && 0.0 <= a && a < b && b <= 1.0;
        if !ordered(x1, x2) || !ordered(y1, y2) {
            return Err(Error::Argument(format!(
                "crop rect ({x1}, {x2}, {y1}, {y2}) must satisfy 0 <= x1 < x2 <= 1 and 0 <= y1 < y2 <= 1"
            )));
        }
        Ok(())
    }

    pub fn is_full(&self) -> bool {
        *self == Self::FULL
    }

    /// Horizontal extent `x2 - x1`, equal to the size factor for sampled crops.
    pub fn size_factor(&self) -> f64 {
        self.x2 - self.x1
    }

    /// Smallest distance from any side of the rectangle to the sensor border.
    pub fn edge_distance(&self) -> f64 {
        self.x1.min(1.0 - self.x2).min(self.y1).min(1.0 - self.y2)
    }

    /// Map a position relative to the cropped frame (`[0, 1]^2`) back to the
    /// sensor plane.
    pub fn to_sensor(&self, rel_x: f64, rel_y: f64) -> (f64, f64) {
        (
            self.x1 + rel_x * (self.x2 - self.x1),
            self.y1 + rel_y * (self.y2 - self.y1),
        )
    }
}

/// Draw a crop: `f ~ U[0.5, 0.9]`, a uniformly chosen pinned edge, and a
/// uniform offset along the free axis.
pub fn sample_crop<R: Rng + ?Sized>(rng: &mut R) -> PinnedCrop {
    let f = rng.random_range(SIZE_FACTOR_RANGE.0..=SIZE_FACTOR_RANGE.1);
    let edge = Edge::ALL[rng.random_range(0..4)];
    let offset = rng.random_range(0.0..=1.0 - f);
    let far = (offset + f).min(1.0);
    let rect = match edge {
        Edge::Top => CropRect {
            x1: offset,
            x2: far,
            y1: 0.0,
            y2: f,
        },
        Edge::Bottom => CropRect {
            x1: offset,
            x2: far,
            y1: 1.0 - f,
            y2: 1.0,
        },
        Edge::Left => CropRect {
            x1: 0.0,
            x2: f,
            y1: offset,
            y2: far,
        },
        Edge::Right => CropRect {
            x1: 1.0 - f,
            x2: 1.0,
            y1: offset,
            y2: far,
        },
    };
    PinnedCrop {
        rect,
        edge,
        size_factor: f,
    }
}

pub fn sample_crop_rect<R: Rng + ?Sized>(rng: &mut R) -> CropRect {
    sample_crop(rng).rect
}

/// Round half up; used for every relative-to-pixel boundary conversion.
pub(crate) fn round_half_up(v: f64) -> i64 {
    (v + 0.5).floor() as i64
}

/// Pixel bounds `[x0, x1) x [y0, y1)` of `rect` on a `width x height` image.
pub fn crop_bounds(
    width: usize,
    height: usize,
    rect: &CropRect,
) -> Result<(usize, usize, usize, usize)> {
    rect.validate()?;
    let px = |v: f64, n: usize| round_half_up(v * n as f64).clamp(0, n as i64) as usize;
    let (x0, x1) = (px(rect.x1, width), px(rect.x2, width));
    let (y0, y1) = (px(rect.y1, height), px(rect.y2, height));
    if x1 <= x0 || y1 <= y0 {
        return Err(Error::DegenerateCrop {
            width,
            height,
            x0,
            x1,
            y0,
            y1,
        });
    }
    Ok((x0, x1, y0, y1))
}

/// Cut the pixel region covered by `rect`; no resampling.
pub fn apply_crop<T: Scalar>(img: &ImageBuffer<T>, rect: &CropRect) -> Result<ImageBuffer<T>> {
    if rect.is_full() {
        return Ok(img.clone());
    }
    let (x0, x1, y0, y1) = crop_bounds(img.width(), img.height(), rect)?;
    img.region(x0, y0, x1 - x0, y1 - y0)
}
