//! PNG and PGM/PPM reading and writing.
//!
//! 8-bit samples map to `[0, 1]` as `v / 255`; writing rounds `v * 255` to
//! the nearest integer. Masks are written as 8-bit gray with values {0, 255}
//! and read back with a midpoint threshold.

use std::io::Cursor;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder, ImageFormat, ImageReader, Limits};

use super::{BinaryMask, ColorSpace, RasterImage};
use crate::error::{Error, Result};

const MAX_SIDE: u32 = 16_384;
const MAX_ALLOC: u64 = 512 * 1024 * 1024;

/// Decodes a PNG or PNM (PGM/PPM/PBM/PAM) payload. Gray inputs become
/// one-channel images, anything with colour becomes RGB. Alpha is dropped.
pub fn decode_image(bytes: &[u8]) -> Result<RasterImage> {
    let mut reader = ImageReader::new(Cursor::new(bytes))
        .with_guessed_format()
        .map_err(|e| Error::Decode(e.to_string()))?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Pnm) => {}
        Some(other) => return Err(Error::Decode(format!("unsupported format {other:?}"))),
        None => return Err(Error::Decode("unrecognised image format".into())),
    }
    let mut limits = Limits::default();
    limits.max_image_width = Some(MAX_SIDE);
    limits.max_image_height = Some(MAX_SIDE);
    limits.max_alloc = Some(MAX_ALLOC);
    reader.limits(limits);
    let img = reader.decode().map_err(|e| Error::Decode(e.to_string()))?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w == 0 || h == 0 {
        return Err(Error::Decode("image has no pixels".into()));
    }
    if img.color().has_color() {
        let rgb = img.to_rgb8();
        let samples = rgb.as_raw().iter().map(|v| *v as f64 / 255.0).collect();
        RasterImage::new(w, h, ColorSpace::Rgb, samples)
    } else {
        let gray = img.to_luma8();
        let samples = gray.as_raw().iter().map(|v| *v as f64 / 255.0).collect();
        RasterImage::new(w, h, ColorSpace::Gray, samples)
    }
}

/// Decodes a mask image; pixels at or above mid-gray are object.
pub fn decode_mask(bytes: &[u8]) -> Result<BinaryMask> {
    let img = decode_image(bytes)?;
    let gray = match img.space() {
        ColorSpace::Gray => img,
        _ => super::rgb_to_gray(&img)?,
    };
    let bits = gray.samples().iter().map(|v| *v >= 0.5).collect();
    BinaryMask::from_bits(gray.width(), gray.height(), bits)
}

fn quantize(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

fn color_type(img: &RasterImage) -> ExtendedColorType {
    match img.channels() {
        1 => ExtendedColorType::L8,
        _ => ExtendedColorType::Rgb8,
    }
}

/// PNG encoding. HSV images are written with their channels stored as-is.
pub fn encode_png(img: &RasterImage) -> Result<Vec<u8>> {
    let data: Vec<u8> = img.samples().iter().map(|v| quantize(*v)).collect();
    png_bytes(&data, img.width(), img.height(), color_type(img))
}

pub fn encode_mask_png(mask: &BinaryMask) -> Result<Vec<u8>> {
    let data: Vec<u8> = mask
        .bits()
        .iter()
        .map(|b| if *b { 255 } else { 0 })
        .collect();
    png_bytes(&data, mask.width(), mask.height(), ExtendedColorType::L8)
}

fn png_bytes(data: &[u8], w: usize, h: usize, ty: ExtendedColorType) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    PngEncoder::new(&mut out)
        .write_image(data, w as u32, h as u32, ty)
        .map_err(|e| Error::Encode(e.to_string()))?;
    Ok(out)
}

/// Binary PGM (gray) or PPM (three channels).
pub fn encode_pnm(img: &RasterImage) -> Result<Vec<u8>> {
    let data: Vec<u8> = img.samples().iter().map(|v| quantize(*v)).collect();
    let subtype = if img.channels() == 1 {
        PnmSubtype::Graymap(SampleEncoding::Binary)
    } else {
        PnmSubtype::Pixmap(SampleEncoding::Binary)
    };
    let mut out = Vec::new();
    PnmEncoder::new(&mut out)
        .with_subtype(subtype)
        .write_image(
            &data,
            img.width() as u32,
            img.height() as u32,
            color_type(img),
        )
        .map_err(|e| Error::Encode(e.to_string()))?;
    Ok(out)
}

pub fn read_image(path: impl AsRef<Path>) -> Result<RasterImage> {
    decode_image(&std::fs::read(path)?)
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    decode_mask(&std::fs::read(path)?)
}
