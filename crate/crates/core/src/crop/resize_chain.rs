//! Random resizes that hide the source resolution from the model.

use rand::Rng;

use super::rect::round_half_up;
use crate::error::Result;
use crate::image::{resize, ImageBuffer, InterpMethod, Plane};
use crate::scalar::Scalar;

pub const RESIZE_WIDTH_RANGE: (usize, usize) = (1024, 2048);
pub const DATASET_ASPECT: f64 = 1.5;
pub const FUZZ_HEIGHT_SPREAD: (f64, f64) = (0.8, 1.2);
pub const FUZZ_PASSES: usize = 3;
pub const THUMBNAIL_WIDTH: usize = 224;
pub const THUMBNAIL_HEIGHT: usize = 149;

pub fn random_method<R: Rng + ?Sized>(rng: &mut R) -> InterpMethod {
    InterpMethod::ALL[rng.random_range(0..InterpMethod::ALL.len())]
}

/// Target of one resize step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResizeStep {
    pub width: usize,
    pub height: usize,
    pub method: InterpMethod,
}

/// Width uniform over `1024..=2048`, height proportional to `width x height`.
pub fn sample_pre_patch_step<R: Rng + ?Sized>(
    width: usize,
    height: usize,
    rng: &mut R,
) -> ResizeStep {
    let w2 = rng.random_range(RESIZE_WIDTH_RANGE.0..=RESIZE_WIDTH_RANGE.1);
    let h2 = round_half_up(w2 as f64 * height as f64 / width as f64).max(1) as usize;
    ResizeStep {
        width: w2,
        height: h2,
        method: random_method(rng),
    }
}

pub fn pre_patch_resize<T: Scalar, R: Rng + ?Sized>(
    img: &ImageBuffer<T>,
    rng: &mut R,
) -> Result<ImageBuffer<T>> {
    let step = sample_pre_patch_step(img.width(), img.height(), rng);
    resize(img, step.width, step.height, step.method)
}

/// `W'` uniform over `1024..=2048`; `H'` uniform over the integers in
/// `[0.8 W'/A, 1.2 W'/A]`.
pub fn sample_fuzz_step<R: Rng + ?Sized>(rng: &mut R) -> ResizeStep {
    let w2 = rng.random_range(RESIZE_WIDTH_RANGE.0..=RESIZE_WIDTH_RANGE.1);
    let lo = (FUZZ_HEIGHT_SPREAD.0 * w2 as f64 / DATASET_ASPECT).ceil() as usize;
    let hi = (FUZZ_HEIGHT_SPREAD.1 * w2 as f64 / DATASET_ASPECT).floor() as usize;
    let h2 = rng.random_range(lo..=hi);
    ResizeStep {
        width: w2,
        height: h2,
        method: random_method(rng),
    }
}

pub fn sample_fuzz_chain<R: Rng + ?Sized>(rng: &mut R) -> [ResizeStep; FUZZ_PASSES] {
    std::array::from_fn(|_| sample_fuzz_step(rng))
}

/// Three successive resizes with fresh random targets and kernels.
pub fn fuzz_resize_chain<T: Scalar, R: Rng + ?Sized>(
    img: &ImageBuffer<T>,
    rng: &mut R,
) -> Result<ImageBuffer<T>> {
    let mut out = img.clone();
    for step in sample_fuzz_chain(rng) {
        out = resize(&out, step.width, step.height, step.method)?;
    }
    Ok(out)
}

/// 224x149 RGB plus normalized coordinate planes.
#[derive(Debug, Clone, PartialEq)]
pub struct Thumbnail<T> {
    pub rgb: ImageBuffer<T>,
    pub coord_x: Plane<T>,
    pub coord_y: Plane<T>,
}

/// Coordinate planes: `(col + 0.5) / width` and `(row + 0.5) / height`.
pub fn coordinate_planes<T: Scalar>(width: usize, height: usize) -> (Plane<T>, Plane<T>) {
    let cx = Plane::from_fn(width, height, |x, _| {
        T::from_f64_lossy((x as f64 + 0.5) / width as f64)
    });
    let cy = Plane::from_fn(width, height, |_, y| {
        T::from_f64_lossy((y as f64 + 0.5) / height as f64)
    });
    (cx, cy)
}

pub fn make_thumbnail<T: Scalar, R: Rng + ?Sized>(
    img: &ImageBuffer<T>,
    rng: &mut R,
) -> Result<Thumbnail<T>> {
    let fuzzed = fuzz_resize_chain(img, rng)?;
    let method = random_method(rng);
    let rgb = resize(&fuzzed, THUMBNAIL_WIDTH, THUMBNAIL_HEIGHT, method)?;
    let (coord_x, coord_y) = coordinate_planes(THUMBNAIL_WIDTH, THUMBNAIL_HEIGHT);
    Ok(Thumbnail {
        rgb,
        coord_x,
        coord_y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{rng_for, Stream};

    #[test]
    fn pre_patch_widths_and_aspect() {
        let mut rng = rng_for(5, Stream::Sample);
        let (mut lo, mut hi) = (usize::MAX, 0);
        for _ in 0..10_000 {
            let s = sample_pre_patch_step(3000, 2000, &mut rng);
            assert!((1024..=2048).contains(&s.width));
            let proportional = s.width as f64 * 2000.0 / 3000.0;
            assert!((s.height as f64 - proportional).abs() <= 1.0);
            lo = lo.min(s.width);
            hi = hi.max(s.width);
        }
        assert_eq!((lo, hi), (1024, 2048));
    }

    #[test]
    fn fuzz_steps_in_range() {
        let mut rng = rng_for(6, Stream::Sample);
        for _ in 0..10_000 {
            let s = sample_fuzz_step(&mut rng);
            assert!((1024..=2048).contains(&s.width));
            let w = s.width as f64;
            assert!(s.height as f64 >= 0.8 * w / 1.5 && s.height as f64 <= 1.2 * w / 1.5);
        }
    }

    #[test]
    fn every_method_gets_drawn() {
        let mut rng = rng_for(9, Stream::Sample);
        let mut counts = [0usize; 5];
        for _ in 0..5000 {
            let m = random_method(&mut rng);
            counts[InterpMethod::ALL.iter().position(|&x| x == m).unwrap()] += 1;
        }
        assert!(counts.iter().all(|&c| c > 900), "{counts:?}");
    }

    #[test]
    fn constant_image_survives_chain_and_thumbnail() {
        let img = ImageBuffer::<f32>::filled(300, 200, [0.25, 0.5, 0.75]).unwrap();
        let mut rng = rng_for(1, Stream::Sample);
        let out = pre_patch_resize(&img, &mut rng).unwrap();
        assert!(out.planes()[1].iter().all(|v| (v - 0.5).abs() <= 1e-6));
        let thumb = make_thumbnail(&img, &mut rng).unwrap();
        assert_eq!(thumb.rgb.dims(), (224, 149));
        for (c, want) in [0.25f32, 0.5, 0.75].iter().enumerate() {
            assert!(thumb.rgb.plane(c).iter().all(|v| (v - want).abs() <= 1e-6));
        }
    }

    #[test]
    fn fuzz_chain_is_seeded() {
        let img = ImageBuffer::<f32>::from_fn(160, 107, |x, y| {
            [(x * y % 7) as f32 / 7.0, 0.3, x as f32 / 160.0]
        })
        .unwrap();
        let a = fuzz_resize_chain(&img, &mut rng_for(42, Stream::Sample)).unwrap();
        let b = fuzz_resize_chain(&img, &mut rng_for(42, Stream::Sample)).unwrap();
        assert_eq!(a, b);
        assert!((1024..=2048).contains(&a.width()));
    }

    #[test]
    fn coordinate_planes_formula() {
        let (cx, cy) = coordinate_planes::<f64>(224, 149);
        assert!((cx.get(0, 0) - 0.5 / 224.0).abs() < 1e-15);
        assert!((cx.get(223, 10) - 223.5 / 224.0).abs() < 1e-15);
        assert!((cy.get(5, 148) - 148.5 / 149.0).abs() < 1e-15);
        assert!((0..223).all(|x| cx.get(x + 1, 0) > cx.get(x, 0)));
        assert!((0..148).all(|y| cy.get(0, y + 1) > cy.get(0, y)));
    }
}
