use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::score;
use super::sweep::evaluate;
use crate::error::{Error, Result};
use crate::imagekit::{io, Point};
use crate::segmenter::SegmenterConfig;
use crate::synthgen::{generate, redraw_prototypes, redraw_rng, SynthConfig};

/// Equal-width bins on `[0, 1]`; the last bin includes 1.
pub const HISTOGRAM_BINS: usize = 20;

/// Prototype re-draws allowed per sample below the redraw threshold.
pub const MAX_REDRAWS: u32 = 5;

/// What happened to one sample of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub index: usize,
    /// Generator seed, or the file name for externally produced masks.
    pub label: String,
    /// Final balanced accuracy; `None` when the sample failed.
    pub ba: Option<f64>,
    /// Balanced accuracy with the first prototype set.
    pub initial_ba: Option<f64>,
    pub redraws: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prototypes: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Aggregate of a batch of scored samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Balanced accuracies of the successful samples, in sample order.
    pub ba: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
    pub std_dev: f64,
    /// Relative frequencies over [`HISTOGRAM_BINS`] bins; sums to 1 when `ba` is nonempty.
    pub histogram: Vec<f64>,
    pub failed: usize,
    pub samples: Vec<SampleOutcome>,
}

impl RunReport {
    pub fn from_outcomes(samples: Vec<SampleOutcome>) -> Self {
        let ba: Vec<f64> = samples.iter().filter_map(|s| s.ba).collect();
        let n = ba.len();
        let mean = if n == 0 {
            0.0
        } else {
            ba.iter().sum::<f64>() / n as f64
        };
        let std_dev = if n < 2 {
            0.0
        } else {
            (ba.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        let mut counts = [0usize; HISTOGRAM_BINS];
        for v in &ba {
            let bin = ((v * HISTOGRAM_BINS as f64).floor() as usize).min(HISTOGRAM_BINS - 1);
            counts[bin] += 1;
        }
        let histogram = counts
            .iter()
            .map(|c| if n == 0 { 0.0 } else { *c as f64 / n as f64 })
            .collect();
        RunReport {
            failed: samples.len() - n,
            ba,
            mean,
            std_dev,
            histogram,
            samples,
        }
    }

    /// Fraction of successful samples whose final BA is below `threshold`.
    pub fn fraction_below(&self, threshold: f64) -> f64 {
        if self.ba.is_empty() {
            return 0.0;
        }
        self.ba.iter().filter(|v| **v < threshold).count() as f64 / self.ba.len() as f64
    }

    /// One row per sample: `index,label,ba,initial_ba,redraws,error`.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("index,label,ba,initial_ba,redraws,error\n");
        for s in &self.samples {
            let err = s
                .error
                .as_deref()
                .unwrap_or("")
                .replace(['"', ',', '\n'], " ");
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.index,
                s.label,
                opt(s.ba),
                opt(s.initial_ba),
                s.redraws,
                err
            ));
        }
        out
    }
}

fn run_one(
    index: usize,
    cfg: &SynthConfig,
    seg: SegmenterConfig,
    redraw_threshold: Option<f64>,
) -> SampleOutcome {
    let mut outcome = SampleOutcome {
        index,
        label: cfg.seed.to_string(),
        ba: None,
        initial_ba: None,
        redraws: 0,
        prototypes: Vec::new(),
        error: None,
    };
    let result = (|| -> Result<()> {
        let sample = generate(cfg)?;
        let (_, first) = evaluate(&sample.image, &sample.gold, &sample.prototypes, seg)?;
        outcome.initial_ba = Some(first);
        let mut best = (first, sample.prototypes.clone());
        if let Some(threshold) = redraw_threshold {
            let mut rng = redraw_rng(cfg.seed);
            while best.0 < threshold && outcome.redraws < MAX_REDRAWS {
                outcome.redraws += 1;
                let redrawn =
                    redraw_prototypes(&sample, cfg.prototype_count as usize, cfg.margin, &mut rng)?;
                let (_, ba) = evaluate(&redrawn.image, &redrawn.gold, &redrawn.prototypes, seg)?;
                if ba > best.0 {
                    best = (ba, redrawn.prototypes);
                }
            }
        }
        outcome.ba = Some(best.0);
        outcome.prototypes = best.1;
        Ok(())
    })();
    if let Err(e) = result {
        outcome.error = Some(e.to_string());
    }
    outcome
}

/// Generates, segments and scores every configuration. Failed samples are
/// recorded and skipped in the statistics. With `redraw_threshold`, samples
/// scoring below it get up to [`MAX_REDRAWS`] fresh prototype sets and keep
/// the best result.
pub fn run_benchmark(
    cfgs: &[SynthConfig],
    seg: &SegmenterConfig,
    redraw_threshold: Option<f64>,
) -> Result<RunReport> {
    if cfgs.is_empty() {
        return Err(Error::Parameter(
            "benchmark needs at least one sample".into(),
        ));
    }
    seg.validate()?;
    if let Some(t) = redraw_threshold {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Parameter(format!(
                "redraw threshold must lie in [0, 1], got {t}"
            )));
        }
    }
    let outcomes = cfgs
        .par_iter()
        .enumerate()
        .map(|(i, cfg)| run_one(i, cfg, *seg, redraw_threshold))
        .collect();
    Ok(RunReport::from_outcomes(outcomes))
}

fn is_image(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref(),
        Some("png" | "pgm" | "ppm" | "pbm" | "pnm")
    )
}

/// Scores externally produced masks: every image in `gold_dir` is paired
/// with the file of the same name in `pred_dir`.
pub fn score_mask_dirs(pred_dir: &Path, gold_dir: &Path) -> Result<RunReport> {
    let mut names: Vec<_> = std::fs::read_dir(gold_dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file() && is_image(p))
        .filter_map(|p| p.file_name().map(|n| n.to_owned()))
        .collect();
    names.sort();
    if names.is_empty() {
        return Err(Error::Parameter(format!(
            "no mask images in {}",
            gold_dir.display()
        )));
    }
    let outcomes = names
        .iter()
        .enumerate()
        .map(|(index, name)| {
            let result = (|| {
                let gold = io::read_mask(gold_dir.join(name))?;
                let pred = io::read_mask(pred_dir.join(name))?;
                score(&pred, &gold)
            })();
            SampleOutcome {
                index,
                label: name.to_string_lossy().into_owned(),
                ba: result.as_ref().ok().copied(),
                initial_ba: result.as_ref().ok().copied(),
                redraws: 0,
                prototypes: Vec::new(),
                error: result.err().map(|e| e.to_string()),
            }
        })
        .collect();
    Ok(RunReport::from_outcomes(outcomes))
}
