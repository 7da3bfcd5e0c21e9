//! Reference segmentation written without any of the library's scoring
//! code. Shared by the oracle tests of several crates.

use csmnn::imagekit::{BinaryMask, ColorSpace, Point, RasterImage};
use csmnn::segmenter::SegmenterConfig;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn naive_window(
    img: &RasterImage,
    row: usize,
    col: usize,
    radius: u32,
    channel: usize,
) -> Vec<f64> {
    let r = radius as i64;
    let (h, w) = (img.height() as i64, img.width() as i64);
    let mut values = Vec::new();
    // Column-major enumeration on purpose; sorting makes the order irrelevant.
    for dc in -r..=r {
        for dr in -r..=r {
            if dr * dr + dc * dc > r * r {
                continue;
            }
            let rr = (row as i64 + dr).max(0).min(h - 1) as usize;
            let cc = (col as i64 + dc).max(0).min(w - 1) as usize;
            values.push(img.samples()[(rr * img.width() + cc) * img.channels() + channel]);
        }
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values
}

fn naive_features(img: &RasterImage, row: usize, col: usize, radius: u32) -> Vec<f64> {
    (0..img.channels())
        .flat_map(|ch| naive_window(img, row, col, radius, ch))
        .collect()
}

fn naive_coincidence(x: &[f64], y: &[f64], d: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = 0.0;
    let mut sx = 0.0;
    let mut sy = 0.0;
    for i in 0..x.len() {
        lo += if x[i] < y[i] { x[i] } else { y[i] };
        hi += if x[i] > y[i] { x[i] } else { y[i] };
        sx += x[i];
        sy += y[i];
    }
    let jac = if hi == 0.0 { 1.0 } else { lo / hi };
    let small = if sx < sy { sx } else { sy };
    let int = if small == 0.0 {
        if hi == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        lo / small
    };
    jac.powf(d) * int
}

pub fn naive_mask(img: &RasterImage, protos: &[Point], cfg: &SegmenterConfig) -> BinaryMask {
    let weights: Vec<Vec<f64>> = protos
        .iter()
        .map(|p| naive_features(img, p.row as usize, p.col as usize, cfg.radius))
        .collect();
    BinaryMask::from_fn(img.width(), img.height(), |row, col| {
        let f = naive_features(img, row, col, cfg.radius);
        let mut fired = false;
        for (p, w) in protos.iter().zip(&weights) {
            let dr = row as f64 - p.row as f64;
            let dc = col as f64 - p.col as f64;
            let dist = (dr * dr + dc * dc).sqrt();
            let s = (naive_coincidence(&f, w, cfg.selectivity) + (-(dist * cfg.decay)).exp()) / 2.0;
            fired |= s >= cfg.threshold;
        }
        fired
    })
}

pub fn random_case(rng: &mut ChaCha8Rng) -> (RasterImage, Vec<Point>, SegmenterConfig) {
    let space = if rng.random_bool(0.5) {
        ColorSpace::Gray
    } else {
        ColorSpace::Hsv
    };
    let levels = rng.random_range(2..=256) as f64 - 1.0;
    let samples = (0..16 * 16 * space.channels())
        .map(|_| (rng.random_range(0.0..=levels)).round() / levels)
        .collect();
    let img = RasterImage::new(16, 16, space, samples).unwrap();
    let protos = (0..rng.random_range(1..=4))
        .map(|_| Point::new(rng.random_range(0..16), rng.random_range(0..16)))
        .collect();
    let cfg = SegmenterConfig {
        selectivity: rng.random_range(0.0..6.0),
        threshold: rng.random_range(0.3..1.0),
        radius: rng.random_range(0..=4),
        decay: if rng.random_bool(0.3) {
            0.0
        } else {
            rng.random_range(0.0..0.5)
        },
    };
    (img, protos, cfg)
}
