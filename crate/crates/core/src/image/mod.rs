//! Image representation, codecs, resampling and warping.

mod buffer;
pub mod codec;
pub mod resample;
pub mod warp;

pub use buffer::{ImageBuffer, Plane};
pub use codec::{decode_image, encode_png, probe_dimensions, BitDepth};
pub use resample::{resize, InterpMethod};
pub use warp::{sample_bilinear, warp, warp_channels};

use crate::scalar::Scalar;

/// Rec.601 luma weights for R, G and B.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

#[inline]
pub(crate) fn luma_of<T: Scalar>(px: [T; 3]) -> T {
    let [r, g, b] = px.map(Scalar::to_f64_lossy);
    let y = LUMA_WEIGHTS[0] * r + LUMA_WEIGHTS[1] * g + LUMA_WEIGHTS[2] * b;
    // exact for gray input
    if r == g && g == b {
        px[0]
    } else {
        T::from_f64_lossy(y)
    }
}

/// Per-pixel Rec.601 luma.
pub fn luma<T: Scalar>(img: &ImageBuffer<T>) -> Plane<T> {
    Plane::from_fn(img.width(), img.height(), |x, y| {
        luma_of(img.pixel(x, y)).clamp_unit()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn luma_of_primaries() {
        let img = ImageBuffer::<f64>::from_fn(2, 1, |x, _| {
            if x == 0 {
                [1.0, 0.0, 0.0]
            } else {
                [0.0, 1.0, 0.0]
            }
        })
        .unwrap();
        let y = luma(&img);
        assert!((y.get(0, 0) - 0.299).abs() < 1e-12);
        assert!((y.get(1, 0) - 0.587).abs() < 1e-12);
    }

    #[test]
    fn weights_sum_to_one() {
        assert!((LUMA_WEIGHTS.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn gray_luma_is_exact(g in 0.0f32..=1.0) {
            let img = ImageBuffer::filled(3, 2, [g; 3]).unwrap();
            prop_assert!(luma(&img).data().iter().all(|&v| v == g));
        }
    }
}
