//! PNG/JPEG decoding and PNG encoding.

use std::io::Cursor;

use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{DynamicImage, ImageError, ImageReader};

use super::ImageBuffer;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// PNG sample depth used when encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum BitDepth {
    #[default]
    #[serde(rename = "8")]
    Eight,
    #[serde(rename = "16")]
    Sixteen,
}

impl BitDepth {
    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            8 => Ok(BitDepth::Eight),
            16 => Ok(BitDepth::Sixteen),
            other => Err(Error::Argument(format!(
                "bit depth must be 8 or 16, got {other}"
            ))),
        }
    }

    pub fn max_code(self) -> f64 {
        match self {
            BitDepth::Eight => 255.0,
            BitDepth::Sixteen => 65535.0,
        }
    }
}

fn map_image_error(err: ImageError) -> Error {
    match err {
        ImageError::Unsupported(e) => Error::UnsupportedFormat(e.to_string()),
        ImageError::Decoding(e) => Error::Decode {
            reason: e.to_string(),
        },
        ImageError::Limits(e) => Error::Decode {
            reason: e.to_string(),
        },
        other => Error::Decode {
            reason: other.to_string(),
        },
    }
}

/// Decode a PNG or JPEG stream. 8-bit samples map to `v / 255`, 16-bit to
/// `v / 65535`; grayscale sources are replicated to three channels and any
/// alpha channel is dropped.
pub fn decode_image<T: Scalar>(bytes: &[u8]) -> Result<ImageBuffer<T>> {
    let reader = ImageReader::new(Cursor::new(bytes))
        .with_guessed_format()
        .map_err(|e| Error::Decode {
            reason: e.to_string(),
        })?;
    if reader.format().is_none() {
        return Err(Error::UnsupportedFormat(
            "unrecognized signature (expected PNG or JPEG)".into(),
        ));
    }
    let decoded = reader.decode().map_err(map_image_error)?;
    from_dynamic(decoded)
}

pub(crate) fn from_dynamic<T: Scalar>(img: DynamicImage) -> Result<ImageBuffer<T>> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let n = w * h;
    let mut planes = [
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    ];
    let wide = matches!(
        img,
        DynamicImage::ImageLuma16(_)
            | DynamicImage::ImageLumaA16(_)
            | DynamicImage::ImageRgb16(_)
            | DynamicImage::ImageRgba16(_)
    );
    if wide {
        let rgb = img.into_rgb16();
        for px in rgb.pixels() {
            for (plane, &v) in planes.iter_mut().zip(&px.0) {
                plane.push(T::from_f64_lossy(v as f64 / 65535.0));
            }
        }
    } else {
        let rgb = img.into_rgb8();
        for px in rgb.pixels() {
            for (plane, &v) in planes.iter_mut().zip(&px.0) {
                plane.push(T::from_f64_lossy(v as f64 / 255.0));
            }
        }
    }
    ImageBuffer::from_planes(w, h, planes)
}

fn quantize<T: Scalar>(v: T, max_code: f64) -> f64 {
    (v.to_f64_lossy().clamp(0.0, 1.0) * max_code).round()
}

/// Encode as PNG with `round(v * (2^d - 1))` quantization. The output is a
/// pure function of the buffer contents and depth.
pub fn encode_png<T: Scalar>(img: &ImageBuffer<T>, depth: BitDepth) -> Result<Vec<u8>> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let n = img.width() * img.height();
    let mut out = Vec::new();
    let encoder =
        PngEncoder::new_with_quality(&mut out, CompressionType::Default, FilterType::Adaptive);
    let max_code = depth.max_code();
    let result = match depth {
        BitDepth::Eight => {
            let mut raw = Vec::with_capacity(n * 3);
            for i in 0..n {
                for c in 0..3 {
                    raw.push(quantize(img.plane(c)[i], max_code) as u8);
                }
            }
            let buf =
                image::RgbImage::from_raw(w, h, raw).expect("buffer length matches dimensions");
            buf.write_with_encoder(encoder)
        }
        BitDepth::Sixteen => {
            let mut raw = Vec::with_capacity(n * 3);
            for i in 0..n {
                for c in 0..3 {
                    raw.push(quantize(img.plane(c)[i], max_code) as u16);
                }
            }
            let buf = image::ImageBuffer::<image::Rgb<u16>, Vec<u16>>::from_raw(w, h, raw)
                .expect("buffer length matches dimensions");
            buf.write_with_encoder(encoder)
        }
    };
    result.map_err(|e| Error::Encode(e.to_string()))?;
    Ok(out)
}

/// Read only the header of an encoded image and return `(width, height)`.
pub fn probe_dimensions(bytes: &[u8]) -> Result<(usize, usize)> {
    let reader = ImageReader::new(Cursor::new(bytes))
        .with_guessed_format()
        .map_err(|e| Error::Decode {
            reason: e.to_string(),
        })?;
    if reader.format().is_none() {
        return Err(Error::UnsupportedFormat(
            "unrecognized signature (expected PNG or JPEG)".into(),
        ));
    }
    let (w, h) = reader.into_dimensions().map_err(map_image_error)?;
    Ok((w as usize, h as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn png_bytes(img: DynamicImage) -> Vec<u8> {
        let mut out = Vec::new();
        img.write_to(&mut Cursor::new(&mut out), image::ImageFormat::Png)
            .unwrap();
        out
    }

    #[test]
    fn decodes_rgb_endpoint() {
        let src = image::RgbImage::from_pixel(1, 1, image::Rgb([255, 0, 0]));
        let img: ImageBuffer<f32> = decode_image(&png_bytes(DynamicImage::ImageRgb8(src))).unwrap();
        assert_eq!(img.pixel(0, 0), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn decodes_gray_replicated() {
        let src = image::GrayImage::from_pixel(1, 1, image::Luma([128]));
        let img: ImageBuffer<f64> =
            decode_image(&png_bytes(DynamicImage::ImageLuma8(src))).unwrap();
        let g = 128.0 / 255.0;
        assert_eq!(img.pixel(0, 0), [g, g, g]);
    }

    #[test]
    fn decodes_sixteen_bit() {
        let src = image::ImageBuffer::<image::Rgb<u16>, _>::from_pixel(
            1,
            1,
            image::Rgb([65535u16, 32768, 0]),
        );
        let img: ImageBuffer<f64> =
            decode_image(&png_bytes(DynamicImage::ImageRgb16(src))).unwrap();
        assert_eq!(img.pixel(0, 0), [1.0, 32768.0 / 65535.0, 0.0]);
    }

    #[test]
    fn truncated_jpeg_is_a_decode_error() {
        let src =
            image::RgbImage::from_fn(32, 32, |x, y| image::Rgb([x as u8 * 8, y as u8 * 8, 0]));
        let mut jpg = Vec::new();
        DynamicImage::ImageRgb8(src)
            .write_to(&mut Cursor::new(&mut jpg), image::ImageFormat::Jpeg)
            .unwrap();
        let err = decode_image::<f32>(&jpg[..jpg.len() / 3]).unwrap_err();
        assert!(matches!(err, Error::Decode { .. }), "{err:?}");
    }

    #[test]
    fn unknown_signature_is_unsupported() {
        let err = decode_image::<f32>(b"GIF89a not really").unwrap_err();
        assert!(matches!(err, Error::UnsupportedFormat(_)), "{err:?}");
        let err = decode_image::<f32>(b"plain text").unwrap_err();
        assert!(matches!(err, Error::UnsupportedFormat(_)), "{err:?}");
    }

    #[test]
    fn half_gray_quantizes_to_128() {
        let img = ImageBuffer::<f32>::filled(3, 2, [0.5; 3]).unwrap();
        let back = image::load_from_memory(&encode_png(&img, BitDepth::Eight).unwrap())
            .unwrap()
            .into_rgb8();
        assert!(back.pixels().all(|p| p.0 == [128, 128, 128]));

        let black = ImageBuffer::<f32>::filled(2, 2, [0.0; 3]).unwrap();
        let back = image::load_from_memory(&encode_png(&black, BitDepth::Eight).unwrap())
            .unwrap()
            .into_rgb8();
        assert!(back.pixels().all(|p| p.0 == [0, 0, 0]));
    }

    #[test]
    fn probe_reads_header() {
        let src = image::RgbImage::new(7, 5);
        assert_eq!(
            probe_dimensions(&png_bytes(DynamicImage::ImageRgb8(src))).unwrap(),
            (7, 5)
        );
    }
}
