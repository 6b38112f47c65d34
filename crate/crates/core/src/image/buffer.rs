use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Single intensity plane, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Scalar> Plane<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        check_dims(width, height)?;
        if data.len() != width * height {
            return Err(Error::Argument(format!(
                "plane data has {} samples, expected {}x{}",
                data.len(),
                width,
                height
            )));
        }
        Ok(Plane {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Plane {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }
}

/// Planar three-channel image with intensities in `[0, 1]`.
///
/// Buffers are never mutated in place by the public API; every operation
/// returns a new buffer. Constructors clamp samples into `[0, 1]` and replace
/// NaN with zero so the range invariant holds for every live buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer<T> {
    width: usize,
    height: usize,
    planes: [Vec<T>; 3],
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Argument(format!(
            "image dimensions must be at least 1x1, got {width}x{height}"
        )));
    }
    Ok(())
}

impl<T: Scalar> ImageBuffer<T> {
    pub fn from_planes(width: usize, height: usize, planes: [Vec<T>; 3]) -> Result<Self> {
        check_dims(width, height)?;
        if planes.iter().any(|p| p.len() != width * height) {
            return Err(Error::Argument(format!(
                "plane lengths {:?} do not match {}x{}",
                planes.iter().map(Vec::len).collect::<Vec<_>>(),
                width,
                height
            )));
        }
        Ok(Self::from_planes_clamped(width, height, planes))
    }

    /// Internal constructor for buffers whose dimensions are already known to
    /// be consistent.
    pub(crate) fn from_planes_clamped(
        width: usize,
        height: usize,
        mut planes: [Vec<T>; 3],
    ) -> Self {
        debug_assert!(width > 0 && height > 0);
        for plane in planes.iter_mut() {
            for v in plane.iter_mut() {
                *v = v.clamp_unit();
            }
        }
        ImageBuffer {
            width,
            height,
            planes,
        }
    }

    pub fn filled(width: usize, height: usize, rgb: [T; 3]) -> Result<Self> {
        check_dims(width, height)?;
        let n = width * height;
        Ok(Self::from_planes_clamped(
            width,
            height,
            [vec![rgb[0]; n], vec![rgb[1]; n], vec![rgb[2]; n]],
        ))
    }

    /// Build a buffer by evaluating `f(x, y)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [T; 3],
    ) -> Result<Self> {
        check_dims(width, height)?;
        let n = width * height;
        let mut planes = [
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        ];
        for y in 0..height {
            for x in 0..width {
                let px = f(x, y);
                for c in 0..3 {
                    planes[c].push(px[c]);
                }
            }
        }
        Ok(Self::from_planes_clamped(width, height, planes))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn plane(&self, channel: usize) -> &[T] {
        &self.planes[channel]
    }

    pub fn planes(&self) -> &[Vec<T>; 3] {
        &self.planes
    }

    pub fn into_planes(self) -> [Vec<T>; 3] {
        self.planes
    }

    #[inline]
    pub fn get(&self, channel: usize, x: usize, y: usize) -> T {
        self.planes[channel][y * self.width + x]
    }

    pub fn pixel(&self, x: usize, y: usize) -> [T; 3] {
        let i = y * self.width + x;
        [self.planes[0][i], self.planes[1][i], self.planes[2][i]]
    }

    /// Apply `f` to every pixel, producing a new clamped buffer.
    pub fn map_pixels(&self, mut f: impl FnMut(usize, usize, [T; 3]) -> [T; 3]) -> Self {
        let n = self.width * self.height;
        let mut planes = [
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        ];
        for y in 0..self.height {
            for x in 0..self.width {
                let px = f(x, y, self.pixel(x, y));
                for c in 0..3 {
                    planes[c].push(px[c]);
                }
            }
        }
        Self::from_planes_clamped(self.width, self.height, planes)
    }

    /// Copy the pixel region starting at `(x0, y0)` with the given size.
    pub fn region(&self, x0: usize, y0: usize, width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        if x0 + width > self.width || y0 + height > self.height {
            return Err(Error::Argument(format!(
                "region {width}x{height}+{x0}+{y0} exceeds {}x{} image",
                self.width, self.height
            )));
        }
        let planes = self.planes.clone().map(|p| {
            let mut out = Vec::with_capacity(width * height);
            for y in y0..y0 + height {
                let start = y * self.width + x0;
                out.extend_from_slice(&p[start..start + width]);
            }
            out
        });
        Ok(ImageBuffer {
            width,
            height,
            planes,
        })
    }

    /// Rotate a quarter turn clockwise ("right").
    pub fn rotate_cw(&self) -> Self {
        let (w, h) = (self.width, self.height);
        // output is h wide, w tall; out(x', y') = in(y', h - 1 - x')
        let planes = self.planes.clone().map(|p| {
            let mut out = Vec::with_capacity(w * h);
            for yo in 0..w {
                for xo in 0..h {
                    out.push(p[(h - 1 - xo) * w + yo]);
                }
            }
            out
        });
        ImageBuffer {
            width: h,
            height: w,
            planes,
        }
    }

    /// Rotate a quarter turn counter-clockwise ("left").
    pub fn rotate_ccw(&self) -> Self {
        let (w, h) = (self.width, self.height);
        // out(x', y') = in(w - 1 - y', x')
        let planes = self.planes.clone().map(|p| {
            let mut out = Vec::with_capacity(w * h);
            for yo in 0..w {
                for xo in 0..h {
                    out.push(p[xo * w + (w - 1 - yo)]);
                }
            }
            out
        });
        ImageBuffer {
            width: h,
            height: w,
            planes,
        }
    }

    /// Convert the sample type.
    pub fn cast<U: Scalar>(&self) -> ImageBuffer<U> {
        let planes = self.planes.clone().map(|p| {
            p.into_iter()
                .map(|v| U::from_f64_lossy(v.to_f64_lossy()))
                .collect()
        });
        ImageBuffer::from_planes_clamped(self.width, self.height, planes)
    }

    /// Mean intensity over all three channels.
    pub fn mean(&self) -> f64 {
        let total: f64 = self
            .planes
            .iter()
            .flat_map(|p| p.iter())
            .map(|v| v.to_f64_lossy())
            .sum();
        total / (3 * self.width * self.height) as f64
    }

    /// Largest absolute per-sample difference to `other` (same dimensions).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dims(), other.dims(), "dimension mismatch");
        self.planes
            .iter()
            .zip(other.planes.iter())
            .flat_map(|(a, b)| a.iter().zip(b.iter()))
            .map(|(a, b)| (a.to_f64_lossy() - b.to_f64_lossy()).abs())
            .fold(0.0, f64::max)
    }
}
