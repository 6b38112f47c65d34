//! Inverse-map warping with bilinear sampling.
//!
//! Maps take the continuous coordinates of a destination pixel center
//! (`col + 0.5`, `row + 0.5`) and return the continuous source position to
//! sample. Sampling clamps to the edge.

use rayon::prelude::*;

use super::ImageBuffer;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bilinear sample of a row-major plane at a continuous pixel-center position.
#[inline]
pub fn sample_bilinear<T: Scalar>(plane: &[T], width: usize, height: usize, xs: f64, ys: f64) -> T {
    let u = (xs - 0.5).clamp(0.0, (width - 1) as f64);
    let v = (ys - 0.5).clamp(0.0, (height - 1) as f64);
    let x0 = u.floor() as usize;
    let y0 = v.floor() as usize;
    let x1 = (x0 + 1).min(width - 1);
    let y1 = (y0 + 1).min(height - 1);
    let tx = T::from_f64_lossy(u - x0 as f64);
    let ty = T::from_f64_lossy(v - y0 as f64);
    let one = T::one();
    let top = plane[y0 * width + x0] * (one - tx) + plane[y0 * width + x1] * tx;
    let bottom = plane[y1 * width + x0] * (one - tx) + plane[y1 * width + x1] * tx;
    top * (one - ty) + bottom * ty
}

fn remap_plane<T: Scalar, F>(plane: &[T], width: usize, height: usize, map: &F) -> Result<Vec<T>>
where
    F: Fn(f64, f64) -> (f64, f64) + Sync,
{
    let mut out = vec![T::zero(); width * height];
    out.par_chunks_mut(width)
        .enumerate()
        .try_for_each(|(row, dst)| {
            let yd = row as f64 + 0.5;
            for (col, o) in dst.iter_mut().enumerate() {
                let (xs, ys) = map(col as f64 + 0.5, yd);
                if !xs.is_finite() || !ys.is_finite() {
                    return Err(Error::NonFiniteCoordinate { col, row });
                }
                *o = sample_bilinear(plane, width, height, xs, ys).clamp_unit();
            }
            Ok(())
        })?;
    Ok(out)
}

/// Warp all three channels through the same inverse map.
pub fn warp<T, F>(img: &ImageBuffer<T>, inverse_map: F) -> Result<ImageBuffer<T>>
where
    T: Scalar,
    F: Fn(f64, f64) -> (f64, f64) + Sync,
{
    warp_channels(
        img,
        [Some(&inverse_map), Some(&inverse_map), Some(&inverse_map)],
    )
}

/// Warp each channel through its own inverse map; `None` leaves a channel
/// untouched.
pub fn warp_channels<T, F>(img: &ImageBuffer<T>, maps: [Option<&F>; 3]) -> Result<ImageBuffer<T>>
where
    T: Scalar,
    F: Fn(f64, f64) -> (f64, f64) + Sync,
{
    let (w, h) = img.dims();
    let mut planes: [Vec<T>; 3] = Default::default();
    for c in 0..3 {
        planes[c] = match maps[c] {
            Some(map) => remap_plane(img.plane(c), w, h, map)?,
            None => img.plane(c).to_vec(),
        };
    }
    Ok(ImageBuffer::from_planes_clamped(w, h, planes))
}
