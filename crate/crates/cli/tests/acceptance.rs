//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use cropforge::crop::{
    extract_patches, patch_grid_centers, patch_label, sample_crop, slot_position, CropRect, Edge,
    NUM_PATCHES, PATCH_SIZE,
};
use cropforge::dataset::assemble_pretext_batches;
use cropforge::image::{encode_png, BitDepth};
use cropforge::lens::{
    apply_radial_distortion, apply_tca, apply_vignetting, correct_radial_distortion,
    undistort_radius, vignette_gain, OpticalFrame, VignetteParams,
};
use cropforge::rng::{rng_for, Stream};
use cropforge::{Image, Image64};
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn vignetting_formula() -> Outcome {
    let p = VignetteParams::TYPICAL;
    let poly = |r: f64| 1.0 + p.a * r.powi(2) + p.b * r.powi(4) + p.c * r.powi(6);
    let at_corner = 1.0 / vignette_gain(1.0, p);
    let at_half = vignette_gain(0.5, p);
    check(
        (at_corner - 0.084432).abs() <= 1e-4
            && (at_half - 2.06299).abs() <= 1e-4
            && (at_corner - 1.0 / poly(1.0)).abs() <= 1e-12
            && (at_half - poly(0.5)).abs() <= 1e-12,
        format!("1/g(1) = {at_corner:.6}, g(0.5) = {at_half:.6}"),
    )
}

fn bisect(r_d: f64, k1: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 2.0_f64.sqrt());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid + k1 * mid.powi(3) < r_d {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn smooth(w: usize, h: usize) -> Image64 {
    Image64::from_fn(w, h, |x, y| {
        let (u, v) = ((x as f64 + 0.5) / w as f64, (y as f64 + 0.5) / h as f64);
        [
            0.15 + 0.7 * u,
            0.2 + 0.6 * v,
            0.5 + 0.3 * (3.0 * u + 2.0 * v).sin(),
        ]
    })
    .unwrap()
}

fn psnr_central(a: &Image64, b: &Image64, keep: f64) -> f64 {
    let (w, h) = a.dims();
    let (mx, my) = (
        ((1.0 - keep) / 2.0 * w as f64) as usize,
        ((1.0 - keep) / 2.0 * h as f64) as usize,
    );
    let (mut se, mut n) = (0.0, 0usize);
    for c in 0..3 {
        for y in my..h - my {
            for x in mx..w - mx {
                se += (a.get(c, x, y) - b.get(c, x, y)).powi(2);
                n += 1;
            }
        }
    }
    10.0 * (1.0 / (se / n as f64)).log10()
}

fn distortion_inverse() -> Outcome {
    let solved = undistort_radius(1.0, 0.1).map_err(|e| e.to_string())?;
    let oracle = bisect(1.0, 0.1);
    let mut worst = 0.0_f64;
    for k1 in [-0.14, -0.05, 0.05, 0.1, 0.2] {
        for i in 0..=100 {
            let r_d = i as f64 / 100.0;
            worst = worst.max(
                (undistort_radius(r_d, k1).map_err(|e| e.to_string())? - bisect(r_d, k1)).abs(),
            );
        }
    }
    let img = smooth(600, 400);
    let distorted = apply_radial_distortion(&img, 0.1).map_err(|e| e.to_string())?;
    let restored = correct_radial_distortion(&distorted, 0.1).map_err(|e| e.to_string())?;
    let psnr = psnr_central(&img, &restored, 0.8);
    check(
        (solved - 0.9217).abs() <= 1e-3 && (solved - oracle).abs() <= 1e-7 && worst <= 1e-7 && psnr > 40.0,
        format!("r_s(1) = {solved:.6} (bisection {oracle:.6}, max gap {worst:.1e}); round-trip PSNR {psnr:.1} dB"),
    )
}

/// Brute force: test the sensor point against every cell box.
fn label_oracle(center: (f64, f64), dims: (usize, usize), rect: &CropRect) -> u8 {
    let u = rect.x1 + center.0 / dims.0 as f64 * (rect.x2 - rect.x1);
    let v = rect.y1 + center.1 / dims.1 as f64 * (rect.y2 - rect.y1);
    let inside = |t: f64, k: usize| {
        let (lo, hi) = (k as f64 / 4.0, (k + 1) as f64 / 4.0);
        t >= lo && (t < hi || (k == 3 && t <= 1.0))
    };
    let mut found = None;
    for row in 0..4 {
        for col in 0..4 {
            if inside(u, col) && inside(v, row) {
                assert!(found.is_none(), "cells overlap");
                found = Some((4 * row + col) as u8);
            }
        }
    }
    found.expect("point outside the sensor")
}

fn label_geometry() -> Outcome {
    let mut rng = rng_for(2024, Stream::Sample);
    let mut agree = 0;
    let trials = 10_000;
    for _ in 0..trials {
        let rect = if rng.random_bool(0.5) {
            sample_crop(&mut rng).rect
        } else {
            CropRect::FULL
        };
        let w = rng.random_range(1024..=2048usize);
        let h = (w as f64 / 1.5).round() as usize;
        let half = (PATCH_SIZE / 2) as f64;
        let c = (
            rng.random_range(half..=w as f64 - half),
            rng.random_range(half..=h as f64 - half),
        );
        if patch_label(c, (w, h), &rect) == label_oracle(c, (w, h), &rect) {
            agree += 1;
        }
    }
    let mut identity = true;
    let frame = Image::filled(1536, 1024, [0.5; 3]).unwrap();
    for seed in 0..500 {
        let mut rng = rng_for(seed, Stream::Sample);
        let centers = patch_grid_centers(1536, 1024, &mut rng).map_err(|e| e.to_string())?;
        for (k, &c) in centers.iter().enumerate() {
            identity &= patch_label(c, (1536, 1024), &CropRect::FULL) as usize == k;
            let (col, row) = slot_position(k);
            identity &= k == 4 * row + col;
        }
        if seed < 20 {
            let set =
                extract_patches(&frame, &centers, &CropRect::FULL).map_err(|e| e.to_string())?;
            identity &= set.labels.iter().enumerate().all(|(k, &l)| l as usize == k);
        }
    }
    check(
        agree == trials && identity,
        format!("{agree}/{trials} pairs agree with the brute-force oracle; uncropped l(k) = k: {identity}"),
    )
}

fn crop_sampler() -> Outcome {
    let mut rng = rng_for(99, Stream::Sample);
    let n = 100_000;
    let mut counts = [0usize; 4];
    let mut bad = 0;
    for _ in 0..n {
        let c = sample_crop(&mut rng);
        let r = c.rect;
        let f_ok = (0.5..=0.9).contains(&c.size_factor);
        let aspect_ok = ((r.x2 - r.x1) - (r.y2 - r.y1)).abs() <= 1e-12;
        let touch = r.x1.min(1.0 - r.x2).min(r.y1).min(1.0 - r.y2);
        if !(f_ok
            && aspect_ok
            && touch.abs() <= 1e-12
            && r.x1 >= 0.0
            && r.y1 >= 0.0
            && r.x2 <= 1.0
            && r.y2 <= 1.0)
        {
            bad += 1;
        }
        counts[match c.edge {
            Edge::Top => 0,
            Edge::Right => 1,
            Edge::Bottom => 2,
            Edge::Left => 3,
        }] += 1;
    }
    let e = n as f64 / 4.0;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    let p = ChiSquared::new(3.0).unwrap().sf(stat);
    check(
        bad == 0 && p > 0.01,
        format!("{bad} violations in {n} draws; edges {counts:?}, chi2 p = {p:.3}"),
    )
}

fn write_corpus(dir: &Path, n: usize) {
    std::fs::create_dir_all(dir).unwrap();
    for k in 0..n {
        let phase = k as f32 * 0.21;
        let img = Image::from_fn(1050, 700, |x, y| {
            let (u, v) = (x as f32 / 1050.0, y as f32 / 700.0);
            [
                0.1 + 0.8 * u,
                0.5 + 0.35 * (9.0 * u - 5.0 * v + phase).sin(),
                0.2 + 0.6 * v * (0.5 + 0.5 * (3.0 * u + phase).cos()),
            ]
        })
        .unwrap();
        std::fs::write(
            dir.join(format!("photo_{k:03}.png")),
            encode_png(&img, BitDepth::Eight).unwrap(),
        )
        .unwrap();
    }
}

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(
                    p.strip_prefix(root).unwrap().to_path_buf(),
                    std::fs::read(&p).unwrap(),
                );
            }
        }
    }
    out
}

fn run_generate(input: &Path, out: &Path, workers: usize) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_cropforge"))
        .args([
            "generate",
            "--seed",
            "7",
            "--workers",
            &workers.to_string(),
            "--input",
        ])
        .arg(input)
        .arg("--out")
        .arg(out)
        .env("RUST_LOG", "warn")
        .status()
        .map_err(|e| e.to_string())?;
    if status.success() {
        Ok(())
    } else {
        Err(format!("generate exited with {status}"))
    }
}

fn pipeline_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = tmp.path().join("corpus");
    write_corpus(&input, 100);
    let runs = [("a", 8), ("b", 8), ("c", 1)];
    for (name, workers) in runs {
        run_generate(&input, &tmp.path().join(name), workers)?;
    }
    let a = tree(&tmp.path().join("a"));
    let records = a.keys().filter(|p| p.ends_with("meta.json")).count();
    let same_seed = a == tree(&tmp.path().join("b"));
    let same_workers = a == tree(&tmp.path().join("c"));
    check(
        records == 100 && same_seed && same_workers,
        format!(
            "{records} records, {} files; rerun identical: {same_seed}; 1 vs 8 workers identical: {same_workers}",
            a.len()
        ),
    )
}

fn batch_assembly() -> Outcome {
    let batches = assemble_pretext_batches(64 * 40 + 7, 64).map_err(|e| e.to_string())?;
    let uniform = batches.iter().all(|b| {
        let mut h = [0usize; NUM_PATCHES];
        for p in b {
            h[p.slot as usize] += 1;
        }
        b.len() == 64 && h == [4; NUM_PATCHES]
    });
    let rejected = assemble_pretext_batches(1000, 10).is_err();
    check(
        uniform && batches.len() == 40 && rejected,
        format!(
            "{} batches of 64, each slot 4x: {uniform}; B = 10 rejected: {rejected}",
            batches.len()
        ),
    )
}

/// Least-squares plane fit `a + gx x + gy y` over a window; returns (gx, gy).
fn plane_gradient(img: &Image64, x0: usize, y0: usize, size: usize) -> (f64, f64) {
    let m = (size as f64 - 1.0) / 2.0;
    let (mut sx, mut sy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0);
    for y in 0..size {
        for x in 0..size {
            let l = 0.299 * img.get(0, x0 + x, y0 + y)
                + 0.587 * img.get(1, x0 + x, y0 + y)
                + 0.114 * img.get(2, x0 + x, y0 + y);
            let (dx, dy) = (x as f64 - m, y as f64 - m);
            sx += dx * l;
            sy += dy * l;
            sxx += dx * dx;
            syy += dy * dy;
        }
    }
    (sx / sxx, sy / syy)
}

fn vignetting_gradient_probe() -> Outcome {
    let (w, h) = (1536, 1024);
    let gray = Image64::filled(w, h, [0.5; 3]).unwrap();
    let vig = apply_vignetting(&gray, 1.0, VignetteParams::TYPICAL).map_err(|e| e.to_string())?;
    let frame = OpticalFrame::centered(w, h);
    let (mut worst, mut outer, mut quadrant_ok) = (0.0_f64, 0, 0);
    for k in 0..NUM_PATCHES {
        let (col, row) = slot_position(k);
        let (cx, cy) = (
            (col as f64 + 0.5) * w as f64 / 4.0,
            (row as f64 + 0.5) * h as f64 / 4.0,
        );
        let (u, v) = frame.normalize(cx, cy);
        if u.hypot(v) < 0.3 {
            continue;
        }
        outer += 1;
        let half = PATCH_SIZE / 2;
        let (gx, gy) = plane_gradient(&vig, cx as usize - half, cy as usize - half, PATCH_SIZE);
        let cos = (gx * -u + gy * -v) / (gx.hypot(gy) * u.hypot(v));
        worst = worst.max(cos.clamp(-1.0, 1.0).acos().to_degrees());
        // brightness rises toward the center, so the cell sits opposite the gradient
        let predicted = (gx < 0.0, gy < 0.0);
        if predicted == (col >= 2, row >= 2) {
            quadrant_ok += 1;
        }
    }
    check(
        outer == 12 && worst <= 5.0 && quadrant_ok == outer,
        format!("{outer} outer cells, worst angle {worst:.3} deg, quadrants {quadrant_ok}/{outer}"),
    )
}

fn tca_impulse() -> Outcome {
    let (w, h) = (401, 201);
    let mut img = Image64::filled(w, h, [0.0; 3]).unwrap();
    img = img.map_pixels(|x, y, _| {
        if (x, y) == (300, 100) {
            [0.7, 1.0, 0.4]
        } else {
            [0.0; 3]
        }
    });
    let out = apply_tca(&img, [1.0, 0.998, 1.0], None).map_err(|e| e.to_string())?;
    let (mut mass, mut mx) = (0.0, 0.0);
    for y in 0..h {
        for x in 0..w {
            let g = out.get(1, x, y);
            mass += g;
            mx += g * (x as f64 + 0.5);
        }
    }
    let shift = 100.0 - (mx / mass - w as f64 / 2.0);
    let untouched = out.plane(0) == img.plane(0) && out.plane(2) == img.plane(2);
    check(
        (shift - 0.2).abs() <= 0.1 && untouched,
        format!("green centroid moved {shift:.4} px inward; red/blue unchanged: {untouched}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("vignetting formula", vignetting_formula),
        ("radial distortion inverse", distortion_inverse),
        ("label geometry", label_geometry),
        ("crop sampler", crop_sampler),
        ("pipeline determinism", pipeline_determinism),
        ("batch assembly", batch_assembly),
        ("vignetting gradient probe", vignetting_gradient_probe),
        ("TCA impulse displacement", tca_impulse),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
