//! Seeded synthetic benchmark images with gold standards and prototype points.
//!
//! A sample is built in four steps from a single ChaCha8 stream seeded with
//! `SynthConfig::seed`:
//!
//! 1. `P` integer points drawn uniformly in the `N x N` grid, rejecting any
//!    closer than the exclusion radius to an accepted point;
//! 2. the gold standard: unit impulses at the points blurred by a Gaussian of
//!    std-dev `sigma`, rescaled to a maximum of 1 and thresholded (inclusive) at `R`;
//! 3. prototypes: `Q` of the points that survive `margin` cross erosions of
//!    the gold standard, so every prototype window lies inside the object;
//! 4. texture: two white-noise fields blurred by `sigma_obj` and `sigma_bck`,
//!    standardized, scaled by `amplitude` gray levels and added to the object
//!    and background means.
//!
//! Prototype re-draws use a second stream of the same seed, so they never
//! perturb the sample itself. Gaussian kernels are truncated at `ceil(3 sigma)`
//! with zero padding outside the image.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagekit::{erode_times, io, BinaryMask, Point, RasterImage};

/// Draw budget for exclusion sampling.
pub const MAX_POINT_DRAWS: u64 = 1_000_000;

/// Generator parameters. JSON names follow the usual symbols (`N`, `e`, `P`, ...).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    /// Image side in pixels.
    #[serde(rename = "N")]
    pub side: u32,
    /// Minimum distance between seed points.
    #[serde(rename = "e")]
    pub exclusion_radius: f64,
    /// Number of seed points.
    #[serde(rename = "P")]
    pub point_count: u32,
    /// Std-dev of the blur that turns points into the gold standard.
    #[serde(rename = "sigma")]
    pub mask_sigma: f64,
    /// Threshold on the max-normalized blurred field.
    #[serde(rename = "R")]
    pub mask_threshold: f64,
    /// Number of prototypes to select.
    #[serde(rename = "Q")]
    pub prototype_count: u32,
    pub mu_obj: f64,
    pub mu_bck: f64,
    pub sigma_obj: f64,
    pub sigma_bck: f64,
    /// Texture standard deviation in gray levels.
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    /// Erosions applied to the gold standard before picking prototypes;
    /// match it to the segmentation radius.
    #[serde(default = "default_margin")]
    pub margin: u32,
    #[serde(default)]
    pub seed: u64,
}

fn default_amplitude() -> f64 {
    30.0
}

fn default_margin() -> u32 {
    4
}

impl Default for SynthConfig {
    /// 128x128 images, 60 points with exclusion radius 6, sigma 5, R 0.3,
    /// 5 prototypes, means 165/65, texture blur 0.7/1, amplitude 30, margin 4.
    fn default() -> Self {
        SynthConfig {
            side: 128,
            exclusion_radius: 6.0,
            point_count: 60,
            mask_sigma: 5.0,
            mask_threshold: 0.3,
            prototype_count: 5,
            mu_obj: 165.0,
            mu_bck: 65.0,
            sigma_obj: 0.7,
            sigma_bck: 1.0,
            amplitude: default_amplitude(),
            margin: default_margin(),
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        SynthConfig {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Parameter(msg));
        if self.side == 0 || self.side > 16_384 {
            return fail(format!("N must be in 1..=16384, got {}", self.side));
        }
        if !(self.exclusion_radius.is_finite() && self.exclusion_radius > 0.0) {
            return fail(format!("e must be positive, got {}", self.exclusion_radius));
        }
        if self.point_count == 0 {
            return fail("P must be at least 1".into());
        }
        if self.prototype_count == 0 || self.prototype_count > self.point_count {
            return fail(format!(
                "Q must be in 1..=P ({}), got {}",
                self.point_count, self.prototype_count
            ));
        }
        if !(0.0..=1.0).contains(&self.mask_threshold) {
            return fail(format!("R must lie in [0, 1], got {}", self.mask_threshold));
        }
        for (name, v) in [("mu_obj", self.mu_obj), ("mu_bck", self.mu_bck)] {
            if !(0.0..=255.0).contains(&v) {
                return fail(format!("{name} must lie in [0, 255], got {v}"));
            }
        }
        for (name, v) in [
            ("sigma", self.mask_sigma),
            ("sigma_obj", self.sigma_obj),
            ("sigma_bck", self.sigma_bck),
            ("amplitude", self.amplitude),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return fail(format!("{name} must be finite and nonnegative, got {v}"));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SynthConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A generated image with its gold standard and prototype points.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthSample {
    pub image: RasterImage,
    pub gold: BinaryMask,
    /// All seed points, in draw order.
    pub points: Vec<Point>,
    pub prototypes: Vec<Point>,
    pub seed: u64,
}

/// The generation stream of a seed.
pub fn sample_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An independent stream of the same seed, used for prototype re-draws.
pub fn redraw_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

/// Uniform integer points with pairwise distance at least `exclusion`.
pub fn poisson_points<R: Rng + ?Sized>(
    side: u32,
    count: usize,
    exclusion: f64,
    rng: &mut R,
) -> Result<Vec<Point>> {
    let min_d2 = exclusion * exclusion;
    let mut points: Vec<Point> = Vec::with_capacity(count);
    let mut draws = 0u64;
    while points.len() < count {
        if draws == MAX_POINT_DRAWS {
            return Err(Error::PointSampling {
                achieved: points.len(),
                requested: count,
                draws,
            });
        }
        draws += 1;
        let p = Point::new(rng.random_range(0..side), rng.random_range(0..side));
        let clear = points.iter().all(|q| {
            let dr = p.row as f64 - q.row as f64;
            let dc = p.col as f64 - q.col as f64;
            dr * dr + dc * dc >= min_d2
        });
        if clear {
            points.push(p);
        }
    }
    Ok(points)
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    if radius == 0 {
        return vec![1.0];
    }
    let k: Vec<f64> = (-radius..=radius)
        .map(|x| (-((x * x) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = k.iter().sum();
    k.into_iter().map(|v| v / total).collect()
}

/// Separable Gaussian blur of a square row-major field, zero padded.
fn blur(field: &[f64], side: usize, sigma: f64) -> Vec<f64> {
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as i64;
    let n = side as i64;
    let pass = |src: &[f64], horizontal: bool| -> Vec<f64> {
        let mut out = vec![0.0; src.len()];
        for r in 0..n {
            for c in 0..n {
                let mut acc = 0.0;
                for (i, w) in kernel.iter().enumerate() {
                    let off = i as i64 - radius;
                    let (rr, cc) = if horizontal {
                        (r, c + off)
                    } else {
                        (r + off, c)
                    };
                    if (0..n).contains(&rr) && (0..n).contains(&cc) {
                        acc += w * src[(rr * n + cc) as usize];
                    }
                }
                out[(r * n + c) as usize] = acc;
            }
        }
        out
    };
    let tmp = pass(field, true);
    pass(&tmp, false)
}

/// Gold standard from seed points.
pub fn make_gold(points: &[Point], side: u32, sigma: f64, threshold: f64) -> BinaryMask {
    let n = side as usize;
    let mut field = vec![0.0; n * n];
    for p in points {
        field[p.row as usize * n + p.col as usize] += 1.0;
    }
    let field = blur(&field, n, sigma);
    let max = field.iter().copied().fold(0.0, f64::max);
    let bits = field
        .iter()
        .map(|v| {
            let scaled = if max > 0.0 { v / max } else { 0.0 };
            scaled >= threshold
        })
        .collect();
    BinaryMask::from_bits(n, n, bits).expect("square mask")
}

fn standardized_noise<R: Rng + ?Sized>(side: usize, sigma: f64, rng: &mut R) -> Vec<f64> {
    let white: Vec<f64> = (0..side * side)
        .map(|_| rng.sample(StandardNormal))
        .collect();
    let mut field = blur(&white, side, sigma);
    let len = field.len() as f64;
    let mean = field.iter().sum::<f64>() / len;
    let var = field.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / len;
    let std = var.sqrt();
    for v in &mut field {
        *v = if std > 0.0 { (*v - mean) / std } else { 0.0 };
    }
    field
}

/// Textured gray image: object pixels around `mu_obj`, background around `mu_bck`.
pub fn make_texture<R: Rng + ?Sized>(
    mask: &BinaryMask,
    cfg: &SynthConfig,
    rng: &mut R,
) -> RasterImage {
    let side = mask.width();
    assert_eq!(side, mask.height(), "texture masks are square");
    let obj = standardized_noise(side, cfg.sigma_obj, rng);
    let bck = standardized_noise(side, cfg.sigma_bck, rng);
    let samples = mask
        .bits()
        .iter()
        .enumerate()
        .map(|(i, inside)| {
            let level = if *inside {
                cfg.mu_obj + cfg.amplitude * obj[i]
            } else {
                cfg.mu_bck + cfg.amplitude * bck[i]
            };
            level.clamp(0.0, 255.0) / 255.0
        })
        .collect();
    RasterImage::gray(side, side, samples).expect("valid texture")
}

/// Picks `count` of `points` that lie inside the gold standard eroded `margin` times.
pub fn pick_prototypes<R: Rng + ?Sized>(
    gold: &BinaryMask,
    points: &[Point],
    count: usize,
    margin: u32,
    rng: &mut R,
) -> Result<Vec<Point>> {
    let core = erode_times(gold, margin);
    let candidates: Vec<Point> = points
        .iter()
        .copied()
        .filter(|p| core.contains_point(*p))
        .collect();
    if candidates.len() < count {
        return Err(Error::TooFewSurvivors {
            survivors: candidates.len(),
            requested: count,
        });
    }
    let mut chosen = index::sample(rng, candidates.len(), count).into_vec();
    chosen.sort_unstable();
    Ok(chosen.into_iter().map(|i| candidates[i]).collect())
}

/// Generates one sample; a pure function of `cfg`.
pub fn generate(cfg: &SynthConfig) -> Result<SynthSample> {
    cfg.validate()?;
    let mut rng = sample_rng(cfg.seed);
    let points = poisson_points(
        cfg.side,
        cfg.point_count as usize,
        cfg.exclusion_radius,
        &mut rng,
    )?;
    let gold = make_gold(&points, cfg.side, cfg.mask_sigma, cfg.mask_threshold);
    let prototypes = pick_prototypes(
        &gold,
        &points,
        cfg.prototype_count as usize,
        cfg.margin,
        &mut rng,
    )?;
    let image = make_texture(&gold, cfg, &mut rng);
    Ok(SynthSample {
        image,
        gold,
        points,
        prototypes,
        seed: cfg.seed,
    })
}

/// Generates samples in parallel; results keep the input order.
pub fn generate_batch(cfgs: &[SynthConfig]) -> Vec<Result<SynthSample>> {
    cfgs.par_iter().map(generate).collect()
}

/// A fresh prototype set for an existing sample. Image and gold are unchanged.
pub fn redraw_prototypes<R: Rng + ?Sized>(
    sample: &SynthSample,
    count: usize,
    margin: u32,
    rng: &mut R,
) -> Result<SynthSample> {
    let prototypes = pick_prototypes(&sample.gold, &sample.points, count, margin, rng)?;
    Ok(SynthSample {
        prototypes,
        ..sample.clone()
    })
}

/// `prototypes.json` written next to a persisted sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleManifest {
    pub prototypes: Vec<Point>,
    pub points: Vec<Point>,
    pub seed: u64,
    pub config: SynthConfig,
}

impl SynthSample {
    /// The files of a persisted sample: `image.png`, `gold.png`, `prototypes.json`.
    pub fn files(&self, cfg: &SynthConfig) -> Result<Vec<(&'static str, Vec<u8>)>> {
        let manifest = SampleManifest {
            prototypes: self.prototypes.clone(),
            points: self.points.clone(),
            seed: self.seed,
            config: cfg.clone(),
        };
        let mut json = serde_json::to_string_pretty(&manifest)?;
        json.push('\n');
        Ok(vec![
            ("image.png", io::encode_png(&self.image)?),
            ("gold.png", io::encode_mask_png(&self.gold)?),
            ("prototypes.json", json.into_bytes()),
        ])
    }
}
