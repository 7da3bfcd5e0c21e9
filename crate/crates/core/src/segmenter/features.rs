use crate::error::Result;
use crate::imagekit::{Point, RasterImage};
use crate::similarity::FeatureVector;

/// Offsets `(drow, dcol)` with `drow² + dcol² <= radius²`, row-major.
pub fn window_offsets(radius: u32) -> Vec<(i32, i32)> {
    let r = radius as i32;
    let r2 = (radius as i64).pow(2);
    let mut out = Vec::new();
    for dr in -r..=r {
        for dc in -r..=r {
            if (dr as i64).pow(2) + (dc as i64).pow(2) <= r2 {
                out.push((dr, dc));
            }
        }
    }
    out
}

/// Number of pixels in the circular window of the given radius.
pub fn window_size(radius: u32) -> usize {
    window_offsets(radius).len()
}

/// Fills `buf` with one sorted block per channel. Out-of-image samples are
/// clamped to the nearest edge pixel.
pub(crate) fn fill_features(
    img: &RasterImage,
    row: usize,
    col: usize,
    offsets: &[(i32, i32)],
    buf: &mut [f64],
) {
    let n = offsets.len();
    for (ch, block) in buf.chunks_exact_mut(n).enumerate() {
        for (slot, (dr, dc)) in block.iter_mut().zip(offsets) {
            *slot = img.get_clamped(row as i64 + *dr as i64, col as i64 + *dc as i64, ch);
        }
        block.sort_unstable_by(f64::total_cmp);
    }
}

/// The feature vector of the window around `position`: per-channel sorted
/// samples, channels concatenated in image order.
pub fn extract_features(img: &RasterImage, position: Point, radius: u32) -> Result<FeatureVector> {
    img.check_point(position)?;
    let offsets = window_offsets(radius);
    let mut buf = vec![0.0; offsets.len() * img.channels()];
    fill_features(
        img,
        position.row as usize,
        position.col as usize,
        &offsets,
        &mut buf,
    );
    FeatureVector::new(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::imagekit::ColorSpace;

    #[test]
    fn window_sizes() {
        assert_eq!(window_offsets(0), vec![(0, 0)]);
        assert_eq!(
            window_offsets(1),
            vec![(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]
        );
        assert_eq!(window_size(2), 13);
        assert_eq!(window_size(4), 49);
    }

    #[test]
    fn constant_image_gives_constant_vector() {
        let img = RasterImage::constant(9, 9, ColorSpace::Gray, 0.25).unwrap();
        let f = extract_features(&img, Point::new(0, 8), 2).unwrap();
        assert_eq!(f.as_slice(), &[0.25; 13]);
    }

    #[test]
    fn radius_zero_is_the_pixel() {
        let img = RasterImage::gray(2, 2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(
            extract_features(&img, Point::new(1, 0), 0)
                .unwrap()
                .as_slice(),
            &[0.3]
        );
    }

    #[test]
    fn window_is_sorted() {
        // Cross around (1,1): up 5, left 3, centre 9, right 3, down 1.
        let v = |x: f64| x / 255.0;
        let samples = vec![0.0, v(5.0), 0.0, v(3.0), v(9.0), v(3.0), 0.0, v(1.0), 0.0];
        let img = RasterImage::gray(3, 3, samples).unwrap();
        let f = extract_features(&img, Point::new(1, 1), 1).unwrap();
        assert_eq!(f.as_slice(), &[v(1.0), v(3.0), v(3.0), v(5.0), v(9.0)]);
    }

    #[test]
    fn colour_blocks_are_sorted_per_channel() {
        let mut samples = Vec::new();
        for i in 0..9 {
            let x = i as f64 / 10.0;
            samples.extend_from_slice(&[x, 1.0 - x, 0.5]);
        }
        let img = RasterImage::new(3, 3, ColorSpace::Rgb, samples).unwrap();
        let f = extract_features(&img, Point::new(1, 1), 2).unwrap();
        assert_eq!(f.len(), 39);
        for block in f.as_slice().chunks(13) {
            assert!(block.windows(2).all(|w| w[0] <= w[1]));
        }
        assert!(f.as_slice()[26..].iter().all(|v| *v == 0.5));
    }

    #[test]
    fn outside_position_is_a_bounds_error() {
        let img = RasterImage::constant(4, 3, ColorSpace::Gray, 0.5).unwrap();
        assert!(matches!(
            extract_features(&img, Point::new(3, 0), 1),
            Err(Error::Bounds { .. })
        ));
    }
}
