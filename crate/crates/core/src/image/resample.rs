//! Separable resampling with five interpolation kernels.
//!
//! All kernels use the pixel-center convention: output sample `i` of an axis
//! resized from `n` to `m` samples sits at source coordinate
//! `(i + 0.5) * n / m`, measured in pixels from the left edge. Source indices
//! outside the image clamp to the nearest edge pixel. Output is clamped to
//! `[0, 1]` after both passes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ImageBuffer;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InterpMethod {
    Nearest,
    Linear,
    Area,
    Cubic,
    Lanczos4,
}

impl InterpMethod {
    pub const ALL: [InterpMethod; 5] = [
        InterpMethod::Nearest,
        InterpMethod::Linear,
        InterpMethod::Area,
        InterpMethod::Cubic,
        InterpMethod::Lanczos4,
    ];
}

const CATMULL_ROM_A: f64 = -0.5;
const LANCZOS_SUPPORT: i64 = 4;

fn cubic_weight(d: f64) -> f64 {
    let a = CATMULL_ROM_A;
    let d = d.abs();
    if d <= 1.0 {
        (a + 2.0) * d * d * d - (a + 3.0) * d * d + 1.0
    } else if d < 2.0 {
        a * d * d * d - 5.0 * a * d * d + 8.0 * a * d - 4.0 * a
    } else {
        0.0
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

fn lanczos_weight(d: f64) -> f64 {
    let support = LANCZOS_SUPPORT as f64;
    if d.abs() >= support {
        0.0
    } else {
        sinc(d) * sinc(d / support)
    }
}

/// Per-output-sample taps along one axis: `(source index, weight)`.
struct AxisTaps<T> {
    taps: Vec<Vec<(usize, T)>>,
}

fn clamp_index(i: i64, n: usize) -> usize {
    i.clamp(0, n as i64 - 1) as usize
}

fn normalized<T: Scalar>(raw: Vec<(usize, f64)>) -> Vec<(usize, T)> {
    let sum: f64 = raw.iter().map(|(_, w)| w).sum();
    raw.into_iter()
        .map(|(i, w)| (i, T::from_f64_lossy(w / sum)))
        .collect()
}

impl<T: Scalar> AxisTaps<T> {
    fn new(src: usize, dst: usize, method: InterpMethod) -> Self {
        let scale = src as f64 / dst as f64;
        let taps = (0..dst)
            .map(|i| {
                let center = (i as f64 + 0.5) * scale;
                match method {
                    InterpMethod::Nearest => {
                        vec![(clamp_index(center.floor() as i64, src), T::one())]
                    }
                    InterpMethod::Linear => {
                        let x = center - 0.5;
                        let x0 = x.floor();
                        let t = x - x0;
                        let x0 = x0 as i64;
                        normalized(vec![
                            (clamp_index(x0, src), 1.0 - t),
                            (clamp_index(x0 + 1, src), t),
                        ])
                    }
                    InterpMethod::Cubic => {
                        let x = center - 0.5;
                        let x0 = x.floor() as i64;
                        normalized(
                            (x0 - 1..=x0 + 2)
                                .map(|j| (clamp_index(j, src), cubic_weight(x - j as f64)))
                                .collect(),
                        )
                    }
                    InterpMethod::Lanczos4 => {
                        let x = center - 0.5;
                        let x0 = x.floor() as i64;
                        normalized(
                            (x0 - LANCZOS_SUPPORT + 1..=x0 + LANCZOS_SUPPORT)
                                .map(|j| (clamp_index(j, src), lanczos_weight(x - j as f64)))
                                .collect(),
                        )
                    }
                    InterpMethod::Area => {
                        let lo = i as f64 * scale;
                        let hi = (i as f64 + 1.0) * scale;
                        let first = lo.floor() as i64;
                        let last = (hi.ceil() as i64).min(src as i64);
                        normalized(
                            (first..last)
                                .filter_map(|j| {
                                    let overlap = hi.min(j as f64 + 1.0) - lo.max(j as f64);
                                    (overlap > 0.0).then(|| (clamp_index(j, src), overlap / scale))
                                })
                                .collect(),
                        )
                    }
                }
            })
            .collect();
        AxisTaps { taps }
    }
}

fn resize_plane<T: Scalar>(
    src: &[T],
    (w, h): (usize, usize),
    (w2, h2): (usize, usize),
    xt: &AxisTaps<T>,
    yt: &AxisTaps<T>,
) -> Vec<T> {
    // horizontal pass: h rows of w2
    let mut tmp = vec![T::zero(); w2 * h];
    tmp.par_chunks_mut(w2).enumerate().for_each(|(y, row)| {
        let src_row = &src[y * w..(y + 1) * w];
        for (x, out) in row.iter_mut().enumerate() {
            *out = xt.taps[x]
                .iter()
                .fold(T::zero(), |acc, &(i, wt)| acc + wt * src_row[i]);
        }
    });
    // vertical pass
    let mut out = vec![T::zero(); w2 * h2];
    out.par_chunks_mut(w2).enumerate().for_each(|(y, row)| {
        for &(j, wt) in &yt.taps[y] {
            let src_row = &tmp[j * w2..(j + 1) * w2];
            for (o, &s) in row.iter_mut().zip(src_row) {
                *o = *o + wt * s;
            }
        }
        for o in row.iter_mut() {
            *o = o.clamp_unit();
        }
    });
    out
}

/// Resize to exactly `width x height` using `method`.
pub fn resize<T: Scalar>(
    img: &ImageBuffer<T>,
    width: usize,
    height: usize,
    method: InterpMethod,
) -> Result<ImageBuffer<T>> {
    if width == 0 || height == 0 {
        return Err(Error::Argument(format!(
            "resize target must be at least 1x1, got {width}x{height}"
        )));
    }
    let xt = AxisTaps::new(img.width(), width, method);
    let yt = AxisTaps::new(img.height(), height, method);
    let planes =
        [0, 1, 2].map(|c| resize_plane(img.plane(c), img.dims(), (width, height), &xt, &yt));
    Ok(ImageBuffer::from_planes_clamped(width, height, planes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn textured(w: usize, h: usize) -> ImageBuffer<f32> {
        ImageBuffer::from_fn(w, h, |x, y| {
            let (xf, yf) = (x as f32, y as f32);
            [
                0.5 + 0.4 * (0.3 * xf).sin() * (0.2 * yf).cos(),
                (xf + yf) / (w + h) as f32,
                0.5 + 0.3 * (0.11 * xf * yf).sin(),
            ]
        })
        .unwrap()
    }

    #[test]
    fn area_two_by_two_to_one() {
        let img = ImageBuffer::<f64>::from_fn(2, 2, |_, y| [y as f64; 3]).unwrap();
        let out = resize(&img, 1, 1, InterpMethod::Area).unwrap();
        assert_eq!(out.pixel(0, 0), [0.5; 3]);
    }

    #[test]
    fn nearest_identity_is_bit_exact() {
        let img = textured(37, 23);
        assert_eq!(resize(&img, 37, 23, InterpMethod::Nearest).unwrap(), img);
    }

    #[test]
    fn all_methods_identity_at_same_size() {
        let img = textured(40, 30);
        for m in InterpMethod::ALL {
            let out = resize(&img, 40, 30, m).unwrap();
            assert!(out.max_abs_diff(&img) < 1e-6, "{m:?}");
        }
    }

    #[test]
    fn zero_target_rejected() {
        let img = textured(4, 4);
        assert!(matches!(
            resize(&img, 0, 4, InterpMethod::Linear),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            resize(&img, 4, 0, InterpMethod::Cubic),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn linear_upsample_interpolates_midpoint() {
        // 2 px ramp [0, 1] doubled: centers at 0.25, 0.75, 1.25, 1.75 in source px
        let img = ImageBuffer::<f64>::from_fn(2, 1, |x, _| [x as f64; 3]).unwrap();
        let out = resize(&img, 4, 1, InterpMethod::Linear).unwrap();
        let row: Vec<f64> = out.plane(0).to_vec();
        assert_eq!(row, vec![0.0, 0.25, 0.75, 1.0]);
    }

    #[test]
    fn cubic_and_lanczos_outputs_stay_in_range() {
        let img =
            ImageBuffer::<f32>::from_fn(16, 16, |x, _| [if x < 8 { 0.0 } else { 1.0 }; 3]).unwrap();
        for m in [InterpMethod::Cubic, InterpMethod::Lanczos4] {
            let out = resize(&img, 45, 31, m).unwrap();
            assert!(out
                .planes()
                .iter()
                .flatten()
                .all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn linear_separable_consistency() {
        let img = textured(61, 47);
        for &(w2, h2) in &[(30usize, 90usize), (123, 20), (17, 17)] {
            let a = resize(
                &resize(&img, w2, 47, InterpMethod::Linear).unwrap(),
                w2,
                h2,
                InterpMethod::Linear,
            )
            .unwrap();
            let b = resize(
                &resize(&img, 61, h2, InterpMethod::Linear).unwrap(),
                w2,
                h2,
                InterpMethod::Linear,
            )
            .unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-5);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn constant_images_survive_every_kernel(
            c in 0.0f32..=1.0,
            w in 1usize..40, h in 1usize..40,
            w2 in 1usize..60, h2 in 1usize..60,
            m in 0usize..5,
        ) {
            let img = ImageBuffer::filled(w, h, [c; 3]).unwrap();
            let out = resize(&img, w2, h2, InterpMethod::ALL[m]).unwrap();
            prop_assert_eq!(out.dims(), (w2, h2));
            let dev = out.planes().iter().flatten().map(|v| (v - c).abs()).fold(0.0f32, f32::max);
            prop_assert!(dev <= 1e-6, "deviation {}", dev);
        }
    }
}
