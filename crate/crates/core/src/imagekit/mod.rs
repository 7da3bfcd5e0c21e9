//! Raster images, binary masks and the 4-neighbourhood operations on them.

mod color;
pub mod io;
mod morphology;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use color::{rgb_to_gray, rgb_to_gray_with, rgb_to_hsv, GrayWeights};
pub use morphology::{borders, dilate, erode, erode_times};

/// Colour space tag of a raster image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorSpace {
    Gray,
    Rgb,
    Hsv,
}

impl ColorSpace {
    pub fn channels(self) -> usize {
        match self {
            ColorSpace::Gray => 1,
            ColorSpace::Rgb | ColorSpace::Hsv => 3,
        }
    }
}

/// Integer pixel coordinates, top-left origin. Serialized as `[row, col]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct Point {
    pub row: u32,
    pub col: u32,
}

impl Point {
    pub const fn new(row: u32, col: u32) -> Self {
        Point { row, col }
    }

    /// Euclidean distance in pixels.
    pub fn distance(self, other: Point) -> f64 {
        let dr = self.row as f64 - other.row as f64;
        let dc = self.col as f64 - other.col as f64;
        (dr * dr + dc * dc).sqrt()
    }
}

impl From<[u32; 2]> for Point {
    fn from([row, col]: [u32; 2]) -> Self {
        Point { row, col }
    }
}

impl From<Point> for [u32; 2] {
    fn from(p: Point) -> Self {
        [p.row, p.col]
    }
}

/// A gray or three-channel image with interleaved samples in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    space: ColorSpace,
    samples: Vec<f64>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, space: ColorSpace, samples: Vec<f64>) -> Result<Self> {
        let expected = width * height * space.channels();
        if samples.len() != expected {
            return Err(Error::dimension(
                format!("{} samples", samples.len()),
                format!("{expected} samples for {width}x{height} {space:?}"),
            ));
        }
        if let Some(v) = samples.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Parameter(format!("sample {v} outside [0, 1]")));
        }
        Ok(RasterImage {
            width,
            height,
            space,
            samples,
        })
    }

    /// Gray image from row-major values.
    pub fn gray(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        Self::new(width, height, ColorSpace::Gray, values)
    }

    pub fn constant(width: usize, height: usize, space: ColorSpace, value: f64) -> Result<Self> {
        Self::new(
            width,
            height,
            space,
            vec![value; width * height * space.channels()],
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn channels(&self) -> usize {
        self.space.channels()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn contains(&self, p: Point) -> bool {
        (p.row as usize) < self.height && (p.col as usize) < self.width
    }

    pub(crate) fn check_point(&self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Bounds {
                row: p.row as i64,
                col: p.col as i64,
                height: self.height,
                width: self.width,
            })
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, channel: usize) -> f64 {
        self.samples[(row * self.width + col) * self.channels() + channel]
    }

    /// The sample at a possibly out-of-image position, clamped to the nearest edge pixel.
    #[inline]
    pub fn get_clamped(&self, row: i64, col: i64, channel: usize) -> f64 {
        let r = row.clamp(0, self.height as i64 - 1) as usize;
        let c = col.clamp(0, self.width as i64 - 1) as usize;
        self.get(r, c, channel)
    }
}

/// Binary image with object pixels `true` (1) and background `false` (0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self::filled(width, height, false)
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Self {
        BinaryMask {
            width,
            height,
            bits: vec![value; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::dimension(
                format!("{} bits", bits.len()),
                format!("{width}x{height} mask"),
            ));
        }
        Ok(BinaryMask {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                bits.push(f(row, col));
            }
        }
        BinaryMask {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    /// Out-of-image positions read as background.
    #[inline]
    pub fn get_or_background(&self, row: i64, col: i64) -> bool {
        row >= 0
            && col >= 0
            && (row as usize) < self.height
            && (col as usize) < self.width
            && self.get(row as usize, col as usize)
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = value;
    }

    pub fn contains_point(&self, p: Point) -> bool {
        (p.row as usize) < self.height
            && (p.col as usize) < self.width
            && self.get(p.row as usize, p.col as usize)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn complement(&self) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// True when every object pixel of `self` is an object pixel of `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.same_shape(other) && self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }

    /// Pixels set in `self` but not in `other`.
    pub fn difference(&self, other: &BinaryMask) -> Result<BinaryMask> {
        self.check_shape(other)?;
        Ok(BinaryMask {
            width: self.width,
            height: self.height,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| *a && !b)
                .collect(),
        })
    }

    pub fn same_shape(&self, other: &BinaryMask) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn check_shape(&self, other: &BinaryMask) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::dimension(
                format!("{}x{} mask", self.width, self.height),
                format!("{}x{} mask", other.width, other.height),
            ))
        }
    }
}
