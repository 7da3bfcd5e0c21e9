use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SegmenterConfig;
use super::distance_relevance;
use super::features::{fill_features, window_offsets};
use crate::error::{Error, Result};
use crate::imagekit::{BinaryMask, Point, RasterImage};
use crate::similarity::{FeatureVector, OverlapSums};

/// One prototype: where it was taken and the sorted window it saw there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrototypeNeuron {
    pub position: Point,
    pub weights: FeatureVector,
}

/// The trained set of neurons together with the configuration used to score.
///
/// Serializes to JSON as `{"config": .., "channels": .., "neurons": [..]}`.
/// Weights are written in shortest round-trip form, so a bank reloads bit-exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BankDocument")]
pub struct NeuronBank {
    config: SegmenterConfig,
    channels: usize,
    neurons: Vec<PrototypeNeuron>,
    #[serde(skip)]
    offsets: Vec<(i32, i32)>,
    #[serde(skip)]
    weight_sums: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BankDocument {
    config: SegmenterConfig,
    channels: usize,
    neurons: Vec<PrototypeNeuron>,
}

impl TryFrom<BankDocument> for NeuronBank {
    type Error = Error;

    fn try_from(doc: BankDocument) -> Result<Self> {
        NeuronBank::from_parts(doc.config, doc.channels, doc.neurons)
    }
}

impl NeuronBank {
    /// Assembles a bank, checking that every neuron has the weight layout the
    /// configuration and channel count imply.
    pub fn from_parts(
        config: SegmenterConfig,
        channels: usize,
        neurons: Vec<PrototypeNeuron>,
    ) -> Result<Self> {
        config.validate()?;
        if channels != 1 && channels != 3 {
            return Err(Error::Type(format!(
                "banks hold 1 or 3 channels, got {channels}"
            )));
        }
        if neurons.is_empty() {
            return Err(Error::Parameter(
                "a neuron bank needs at least one prototype".into(),
            ));
        }
        let offsets = window_offsets(config.radius);
        let expected = offsets.len() * channels;
        for (k, n) in neurons.iter().enumerate() {
            let w = n.weights.as_slice();
            if w.len() != expected {
                return Err(Error::dimension(
                    format!("neuron {k} has {} weights", w.len()),
                    format!("{expected} expected"),
                ));
            }
            if w.chunks(offsets.len())
                .any(|b| b.windows(2).any(|p| p[0] > p[1]))
            {
                return Err(Error::Parameter(format!(
                    "neuron {k} weights are not sorted per channel"
                )));
            }
        }
        let weight_sums = neurons
            .iter()
            .map(|n| n.weights.as_slice().iter().sum())
            .collect();
        Ok(NeuronBank {
            config,
            channels,
            neurons,
            offsets,
            weight_sums,
        })
    }

    pub fn config(&self) -> &SegmenterConfig {
        &self.config
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn neurons(&self) -> &[PrototypeNeuron] {
        &self.neurons
    }

    /// The same neurons scored with a different threshold, decay or selectivity.
    /// The radius must match the one the weights were extracted with.
    pub fn with_config(&self, config: SegmenterConfig) -> Result<Self> {
        if config.radius != self.config.radius {
            return Err(Error::Parameter(format!(
                "bank was trained with r={}, cannot rescore with r={}",
                self.config.radius, config.radius
            )));
        }
        config.validate()?;
        Ok(NeuronBank {
            config,
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn check_image(&self, img: &RasterImage) -> Result<()> {
        if img.channels() != self.channels {
            return Err(Error::Type(format!(
                "bank expects {} channel(s), image has {}",
                self.channels,
                img.channels()
            )));
        }
        Ok(())
    }

    /// Best combined score over all neurons for a pixel whose sorted features are in `features`.
    fn best_score(&self, features: &[f64], at: Point) -> f64 {
        let x_sum: f64 = features.iter().sum();
        let mut best = f64::NEG_INFINITY;
        for (neuron, &y_sum) in self.neurons.iter().zip(&self.weight_sums) {
            let mut min_sum = 0.0;
            let mut max_sum = 0.0;
            for (&a, &b) in features.iter().zip(neuron.weights.as_slice()) {
                min_sum += a.min(b);
                max_sum += a.max(b);
            }
            let sums = OverlapSums {
                min_sum,
                max_sum,
                x_sum,
                y_sum,
            };
            let relevance = distance_relevance(at.distance(neuron.position), self.config.decay);
            let score = (sums.coincidence(self.config.selectivity) + relevance) / 2.0;
            best = best.max(score);
        }
        best
    }

    /// Scores every pixel. Rows are evaluated in parallel; the result does not
    /// depend on the partitioning.
    pub fn score_map(&self, img: &RasterImage) -> Result<ScoreMap> {
        self.check_image(img)?;
        let (w, h) = (img.width(), img.height());
        let mut scores = vec![0.0; w * h];
        let len = self.offsets.len() * self.channels;
        scores
            .par_chunks_mut(w.max(1))
            .enumerate()
            .for_each(|(row, out)| {
                let mut buf = vec![0.0; len];
                for (col, slot) in out.iter_mut().enumerate() {
                    fill_features(img, row, col, &self.offsets, &mut buf);
                    *slot = self.best_score(&buf, Point::new(row as u32, col as u32));
                }
            });
        Ok(ScoreMap {
            width: w,
            height: h,
            scores,
        })
    }
}

/// Per-pixel combined scores, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMap {
    width: usize,
    height: usize,
    scores: Vec<f64>,
}

impl ScoreMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.scores[row * self.width + col]
    }

    /// Object wherever the score reaches `threshold` (inclusive).
    pub fn threshold(&self, threshold: f64) -> BinaryMask {
        let bits = self.scores.iter().map(|s| *s >= threshold).collect();
        BinaryMask::from_bits(self.width, self.height, bits).expect("score map shape")
    }

    /// `(min, max, mean)` of the scores.
    pub fn stats(&self) -> (f64, f64, f64) {
        let min = self.scores.iter().copied().fold(f64::INFINITY, f64::min);
        let max = self
            .scores
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let mean = self.scores.iter().sum::<f64>() / self.scores.len().max(1) as f64;
        (min, max, mean)
    }
}

/// Builds one neuron per prototype from the windows of `img`.
pub fn train(
    img: &RasterImage,
    prototypes: &[Point],
    config: SegmenterConfig,
) -> Result<NeuronBank> {
    config.validate()?;
    if prototypes.is_empty() {
        return Err(Error::Parameter(
            "at least one prototype point is required".into(),
        ));
    }
    let offsets = window_offsets(config.radius);
    let mut neurons = Vec::with_capacity(prototypes.len());
    for &p in prototypes {
        img.check_point(p)?;
        let mut buf = vec![0.0; offsets.len() * img.channels()];
        fill_features(img, p.row as usize, p.col as usize, &offsets, &mut buf);
        neurons.push(PrototypeNeuron {
            position: p,
            weights: FeatureVector::new(buf)?,
        });
    }
    NeuronBank::from_parts(config, img.channels(), neurons)
}

/// Combined score of a single pixel: the best over neurons of the mean of
/// window coincidence and distance relevance.
pub fn pixel_score(bank: &NeuronBank, img: &RasterImage, pixel: Point) -> Result<f64> {
    bank.check_image(img)?;
    img.check_point(pixel)?;
    let mut buf = vec![0.0; bank.offsets.len() * bank.channels];
    fill_features(
        img,
        pixel.row as usize,
        pixel.col as usize,
        &bank.offsets,
        &mut buf,
    );
    Ok(bank.best_score(&buf, pixel))
}

/// Segments `img`: a pixel is object when any neuron scores it at or above the threshold.
pub fn segment(bank: &NeuronBank, img: &RasterImage) -> Result<BinaryMask> {
    Ok(bank.score_map(img)?.threshold(bank.config.threshold))
}
