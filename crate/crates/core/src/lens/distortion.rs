//! Square-law radial distortion. A source point at normalized radius `r_s`
//! lands at `r_d = r_s (1 + k1 r_s^2)`: `k1 > 0` pushes points outward
//! (pincushion), `k1 < 0` pulls them inward (barrel). Rendering inverts the
//! map per destination pixel with Newton's method on the cubic.

use std::sync::Mutex;

use super::OpticalFrame;
use crate::error::{Error, Result};
use crate::image::{warp, ImageBuffer};
use crate::scalar::Scalar;

pub const DISTORTION_TOLERANCE: f64 = 1e-8;
pub const DISTORTION_MAX_ITERATIONS: usize = 25;

/// Largest source radius the forward map must stay monotone on.
const MONOTONE_RADIUS: f64 = std::f64::consts::SQRT_2;

pub fn distort_radius(r_s: f64, k1: f64) -> f64 {
    r_s * (1.0 + k1 * r_s * r_s)
}

/// Reject coefficients for which the forward map folds over on `[0, sqrt 2]`
/// or fails to reach the frame corner (`r_d = 1`) before `sqrt 2`. The second
/// condition (`k1 >= (1/sqrt 2 - 1) / 2 ~ -0.146`) guarantees every
/// destination pixel has a source radius in the monotone region.
pub fn check_distortion_coefficient(k1: f64) -> Result<()> {
    let r = MONOTONE_RADIUS;
    if !k1.is_finite() || 1.0 + 3.0 * k1 * r * r <= 0.0 {
        return Err(Error::Argument(format!(
            "distortion k1 = {k1} makes the radial map non-monotone (need k1 > -1/6)"
        )));
    }
    if distort_radius(r, k1) < 1.0 {
        return Err(Error::Argument(format!(
            "distortion k1 = {k1} leaves the frame corners without a source pixel (need k1 >= {:.4})",
            (1.0 / r - 1.0) / 2.0
        )));
    }
    Ok(())
}

/// Solve `k1 r^3 + r - r_d = 0` for the source radius, starting at `r_d`.
pub fn undistort_radius(r_d: f64, k1: f64) -> Result<f64> {
    let mut r = r_d;
    for _ in 0..DISTORTION_MAX_ITERATIONS {
        let f = k1 * r * r * r + r - r_d;
        let df = 3.0 * k1 * r * r + 1.0;
        let step = f / df;
        r -= step;
        if step.abs() < DISTORTION_TOLERANCE {
            return Ok(r);
        }
    }
    Err(Error::NoConvergence { radius: r_d, k1 })
}

/// Inverse map `destination -> source` in continuous pixel coordinates.
///
/// Returns NaN coordinates where Newton fails; [`apply_radial_distortion`]
/// turns those into [`Error::NoConvergence`].
pub fn undistortion_map(
    width: usize,
    height: usize,
    k1: f64,
) -> impl Fn(f64, f64) -> (f64, f64) + Sync {
    let frame = OpticalFrame::centered(width, height);
    move |x, y| {
        let (u, v) = frame.normalize(x, y);
        let r_d = u.hypot(v);
        if r_d == 0.0 {
            return (x, y);
        }
        match undistort_radius(r_d, k1) {
            Ok(r_s) => {
                let s = r_s / r_d;
                frame.denormalize(u * s, v * s)
            }
            Err(_) => (f64::NAN, f64::NAN),
        }
    }
}

pub fn apply_radial_distortion<T: Scalar>(img: &ImageBuffer<T>, k1: f64) -> Result<ImageBuffer<T>> {
    check_distortion_coefficient(k1)?;
    if k1 == 0.0 {
        return Ok(img.clone());
    }
    let map = undistortion_map(img.width(), img.height(), k1);
    let frame = OpticalFrame::centered(img.width(), img.height());
    let failure = Mutex::new(None);
    let result = warp(img, |x, y| {
        let p = map(x, y);
        if p.0.is_nan() {
            let (u, v) = frame.normalize(x, y);
            failure.lock().expect("poisoned").get_or_insert(u.hypot(v));
        }
        p
    });
    if let Some(radius) = failure.into_inner().expect("poisoned") {
        return Err(Error::NoConvergence { radius, k1 });
    }
    result
}

/// Undo [`apply_radial_distortion`] by sampling the distorted image at the
/// forward-mapped position of every pixel.
pub fn correct_radial_distortion<T: Scalar>(
    img: &ImageBuffer<T>,
    k1: f64,
) -> Result<ImageBuffer<T>> {
    check_distortion_coefficient(k1)?;
    if k1 == 0.0 {
        return Ok(img.clone());
    }
    let frame = OpticalFrame::centered(img.width(), img.height());
    warp(img, |x, y| {
        let (u, v) = frame.normalize(x, y);
        let s = 1.0 + k1 * (u * u + v * v);
        frame.denormalize(u * s, v * s)
    })
}
