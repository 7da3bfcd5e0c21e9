use crate::error::{Error, Result};

use super::{ColorSpace, RasterImage};

/// Luma weights for colour-to-gray conversion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrayWeights {
    pub red: f64,
    pub green: f64,
    pub blue: f64,
}

impl GrayWeights {
    /// ITU-R BT.601.
    pub const BT601: GrayWeights = GrayWeights {
        red: 0.299,
        green: 0.587,
        blue: 0.114,
    };
}

impl Default for GrayWeights {
    fn default() -> Self {
        GrayWeights::BT601
    }
}

fn require_rgb(img: &RasterImage) -> Result<()> {
    if img.space() == ColorSpace::Rgb {
        Ok(())
    } else {
        Err(Error::Type(format!(
            "expected an RGB image, got {:?}",
            img.space()
        )))
    }
}

/// Hexcone RGB to HSV. Hue is stored as `degrees / 360` in `[0, 1)`.
pub fn rgb_to_hsv(img: &RasterImage) -> Result<RasterImage> {
    require_rgb(img)?;
    let mut out = Vec::with_capacity(img.samples().len());
    for px in img.samples().chunks_exact(3) {
        let (r, g, b) = (px[0], px[1], px[2]);
        let max = r.max(g).max(b);
        let min = r.min(g).min(b);
        let delta = max - min;
        let hue = if delta == 0.0 {
            0.0
        } else if max == r {
            let h = (g - b) / delta;
            if h < 0.0 {
                h + 6.0
            } else {
                h
            }
        } else if max == g {
            (b - r) / delta + 2.0
        } else {
            (r - g) / delta + 4.0
        } / 6.0;
        let sat = if max == 0.0 { 0.0 } else { delta / max };
        out.extend_from_slice(&[hue.clamp(0.0, 1.0), sat, max]);
    }
    RasterImage::new(img.width(), img.height(), ColorSpace::Hsv, out)
}

/// Gray conversion with BT.601 luma weights.
pub fn rgb_to_gray(img: &RasterImage) -> Result<RasterImage> {
    rgb_to_gray_with(img, GrayWeights::BT601)
}

pub fn rgb_to_gray_with(img: &RasterImage, w: GrayWeights) -> Result<RasterImage> {
    require_rgb(img)?;
    let out = img
        .samples()
        .chunks_exact(3)
        .map(|px| (w.red * px[0] + w.green * px[1] + w.blue * px[2]).clamp(0.0, 1.0))
        .collect();
    RasterImage::new(img.width(), img.height(), ColorSpace::Gray, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pixel(r: f64, g: f64, b: f64) -> RasterImage {
        RasterImage::new(1, 1, ColorSpace::Rgb, vec![r, g, b]).unwrap()
    }

    #[test]
    fn hsv_examples() {
        assert_eq!(
            rgb_to_hsv(&pixel(1.0, 0.0, 0.0)).unwrap().samples(),
            &[0.0, 1.0, 1.0]
        );
        assert_eq!(
            rgb_to_hsv(&pixel(0.5, 0.5, 0.5)).unwrap().samples(),
            &[0.0, 0.0, 0.5]
        );
        let green = rgb_to_hsv(&pixel(0.0, 1.0, 0.0)).unwrap();
        assert!((green.samples()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(&green.samples()[1..], &[1.0, 1.0]);
        assert_eq!(
            rgb_to_hsv(&pixel(0.0, 0.0, 0.0)).unwrap().samples(),
            &[0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn gray_examples() {
        assert!((rgb_to_gray(&pixel(1.0, 1.0, 1.0)).unwrap().samples()[0] - 1.0).abs() < 1e-15);
        assert_eq!(
            rgb_to_gray(&pixel(0.0, 0.0, 0.0)).unwrap().samples(),
            &[0.0]
        );
        assert_eq!(
            rgb_to_gray(&pixel(1.0, 0.0, 0.0)).unwrap().samples(),
            &[0.299]
        );
    }

    #[test]
    fn wrong_space_is_a_type_error() {
        let gray = RasterImage::gray(1, 1, vec![0.5]).unwrap();
        assert!(matches!(rgb_to_hsv(&gray), Err(Error::Type(_))));
        assert!(matches!(rgb_to_gray(&gray), Err(Error::Type(_))));
        let hsv = rgb_to_hsv(&pixel(0.2, 0.4, 0.6)).unwrap();
        assert!(matches!(rgb_to_hsv(&hsv), Err(Error::Type(_))));
    }
}
