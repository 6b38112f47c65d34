//! Deterministic crop-detection dataset engine and lens-aberration simulator.
//!
//! The crate turns full-sensor photographs into training samples for crop
//! detection: each sample carries a 224x149 thumbnail with coordinate
//! channels, sixteen 96x96 patches labelled by their cell on a 4x4 grid over
//! the original sensor plane, the crop rectangle, and a cropped flag. Optical
//! aberrations (chromatic aberration, vignetting, radial distortion,
//! saturation) can be synthesized on the full frame before cropping.
//!
//! Image operations are generic over the sample type (see [`Scalar`]); the
//! dataset pipeline runs on [`Image`] (`f32`).

pub mod crop;
pub mod dataset;
pub mod error;
pub mod image;
pub mod lens;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Working image type of the dataset pipeline.
pub type Image = image::ImageBuffer<f32>;
/// Double-precision image, used by oracles and analysis code.
pub type Image64 = image::ImageBuffer<f64>;
pub type Profile = lens::AberrationProfile;
pub type Sample = crop::SampleRecord<f32>;
