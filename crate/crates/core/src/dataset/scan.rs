//! Corpus ingestion: orientation, aspect and resolution admission rules.

use std::path::{Path, PathBuf};

use log::{info, warn};
use rand::Rng;
use walkdir::WalkDir;

use super::manifest::{DatasetManifest, GenerationConfig, ManifestEntry, Rotation};
use crate::crop::DATASET_ASPECT;
use crate::error::{Error, Result};
use crate::image::{decode_image, probe_dimensions, resize, InterpMethod};
use crate::rng::{mix_seed, rng_for, Stream};
use crate::Image;

/// Why an image was left out of the manifest.
#[derive(Debug, Clone, PartialEq)]
pub enum Rejection {
    Unreadable(String),
    AspectRatio { width: usize, height: usize },
    TooSmall { width: usize, height: usize },
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::Unreadable(reason) => write!(f, "unreadable: {reason}"),
            Rejection::AspectRatio { width, height } => {
                write!(
                    f,
                    "aspect ratio {:.4} ({width}x{height} after orientation)",
                    *width as f64 / *height as f64
                )
            }
            Rejection::TooSmall { width, height } => {
                write!(f, "too small ({width}x{height} after downscaling)")
            }
        }
    }
}

/// Outcome of the admission rules for one image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admission {
    pub rotated: Rotation,
    pub width: usize,
    pub height: usize,
}

/// Apply the admission rules to raw `width x height`. Portrait images are
/// turned landscape (direction drawn from `rng`), the aspect must be within
/// tolerance of the target, oversized images are scaled down to the maximum
/// dimension, and anything narrower than the minimum width is dropped.
pub fn admit<R: Rng + ?Sized>(
    width: usize,
    height: usize,
    config: &GenerationConfig,
    rng: &mut R,
) -> std::result::Result<Admission, Rejection> {
    if width == 0 || height == 0 {
        return Err(Rejection::TooSmall { width, height });
    }
    let (rotated, w, h) = if height > width {
        let dir = if rng.random_bool(0.5) {
            Rotation::Left
        } else {
            Rotation::Right
        };
        (dir, height, width)
    } else {
        (Rotation::None, width, height)
    };
    if (w as f64 / h as f64 - config.aspect_ratio).abs() > config.aspect_tolerance {
        return Err(Rejection::AspectRatio {
            width: w,
            height: h,
        });
    }
    let (w, h) = if w.max(h) > config.max_dimension {
        let scale = config.max_dimension as f64 / w.max(h) as f64;
        let (w2, h2) = (
            (w as f64 * scale + 0.5).floor() as usize,
            (h as f64 * scale + 0.5).floor() as usize,
        );
        (w2.max(1), h2.max(1))
    } else {
        (w, h)
    };
    if w < config.min_width {
        return Err(Rejection::TooSmall {
            width: w,
            height: h,
        });
    }
    Ok(Admission {
        rotated,
        width: w,
        height: h,
    })
}

fn is_image_path(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref(),
        Some("png" | "jpg" | "jpeg")
    )
}

fn relative_key(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join("/")
}

/// Walk `dir` for PNG/JPEG files and build a manifest of admitted images.
/// Rejected and unreadable files are logged and returned alongside.
pub fn scan_and_filter(
    dir: &Path,
    config: &GenerationConfig,
    master_seed: u64,
) -> Result<(DatasetManifest, Vec<(String, Rejection)>)> {
    if !dir.is_dir() {
        return Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        ));
    }
    let mut files: Vec<PathBuf> = WalkDir::new(dir)
        .follow_links(true)
        .into_iter()
        .filter_map(|e| match e {
            Ok(e) => Some(e),
            Err(err) => {
                warn!("skipping unreadable path: {err}");
                None
            }
        })
        .filter(|e| e.file_type().is_file() && is_image_path(e.path()))
        .map(|e| e.into_path())
        .collect();
    files.sort_by_key(|p| relative_key(dir, p));

    let mut entries = Vec::new();
    let mut rejected = Vec::new();
    for path in files {
        let key = relative_key(dir, &path);
        let dims = std::fs::read(&path)
            .map_err(|e| e.to_string())
            .and_then(|bytes| probe_dimensions(&bytes).map_err(|e| e.to_string()));
        let (w, h) = match dims {
            Ok(d) => d,
            Err(reason) => {
                warn!("skipping {key}: {reason}");
                rejected.push((key, Rejection::Unreadable(reason)));
                continue;
            }
        };
        let sample_seed = mix_seed(master_seed, &key);
        let mut rng = rng_for(sample_seed, Stream::Orientation);
        match admit(w, h, config, &mut rng) {
            Ok(a) => entries.push(ManifestEntry {
                source_path: key,
                width: a.width,
                height: a.height,
                rotated: a.rotated,
                split: None,
                crop_assigned: false,
                sample_seed,
            }),
            Err(reason) => {
                info!("rejecting {key}: {reason}");
                rejected.push((key, reason));
            }
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptyCorpus(dir.to_path_buf()));
    }
    Ok((
        DatasetManifest {
            root: dir.to_path_buf(),
            master_seed,
            config_digest: config.digest(),
            entries,
        },
        rejected,
    ))
}

/// Decode a manifest entry's source and bring it to its stored orientation
/// and size.
pub fn load_entry_image(root: &Path, entry: &ManifestEntry) -> Result<Image> {
    let path = root.join(&entry.source_path);
    let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let img: Image = decode_image(&bytes)?;
    let img = match entry.rotated {
        Rotation::None => img,
        Rotation::Left => img.rotate_ccw(),
        Rotation::Right => img.rotate_cw(),
    };
    if img.width() < img.height() {
        return Err(Error::Argument(format!(
            "{}: orientation mismatch ({}x{} after rotation)",
            entry.source_path,
            img.width(),
            img.height()
        )));
    }
    if img.dims() == (entry.width, entry.height) {
        return Ok(img);
    }
    // the only admissible size change is the max-dimension downscale
    let aspect = img.width() as f64 / img.height() as f64;
    if (aspect - entry.width as f64 / entry.height as f64).abs() > 0.01
        || (aspect - DATASET_ASPECT).abs() > 0.01
    {
        return Err(Error::Argument(format!(
            "{}: source is {}x{}, manifest expects {}x{}",
            entry.source_path,
            img.width(),
            img.height(),
            entry.width,
            entry.height
        )));
    }
    resize(&img, entry.width, entry.height, InterpMethod::Linear)
}
