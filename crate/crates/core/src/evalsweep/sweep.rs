use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::metrics::score;
use crate::error::{Error, Result};
use crate::imagekit::{BinaryMask, Point, RasterImage};
use crate::segmenter::{segment, train, SegmenterConfig};

/// One of the four segmentation parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parameter {
    #[serde(rename = "D")]
    Selectivity,
    #[serde(rename = "T")]
    Threshold,
    #[serde(rename = "r")]
    Radius,
    #[serde(rename = "a")]
    Decay,
}

impl Parameter {
    pub fn symbol(self) -> &'static str {
        match self {
            Parameter::Selectivity => "D",
            Parameter::Threshold => "T",
            Parameter::Radius => "r",
            Parameter::Decay => "a",
        }
    }

    /// `base` with this parameter replaced by `value`, validated.
    pub fn apply(self, base: SegmenterConfig, value: f64) -> Result<SegmenterConfig> {
        let mut cfg = base;
        match self {
            Parameter::Selectivity => cfg.selectivity = value,
            Parameter::Threshold => cfg.threshold = value,
            Parameter::Decay => cfg.decay = value,
            Parameter::Radius => {
                if !(value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                    return Err(Error::Parameter(format!(
                        "r must be a nonnegative integer, got {value}"
                    )));
                }
                cfg.radius = value as u32;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" => Ok(Parameter::Selectivity),
            "T" => Ok(Parameter::Threshold),
            "r" => Ok(Parameter::Radius),
            "a" => Ok(Parameter::Decay),
            other => Err(Error::Parameter(format!(
                "unknown parameter {other:?}; expected D, T, r or a"
            ))),
        }
    }
}

/// A one-dimensional sweep: `parameter` takes each of `values`, the rest stay at `base`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: Parameter,
    pub values: Vec<f64>,
    pub base: SegmenterConfig,
}

impl SweepSpec {
    pub fn configs(&self) -> Result<Vec<SegmenterConfig>> {
        if self.values.is_empty() {
            return Err(Error::Parameter("sweep needs at least one value".into()));
        }
        self.base.validate()?;
        self.values
            .iter()
            .map(|v| self.parameter.apply(self.base, *v))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub ba: f64,
}

/// Trains, segments and scores one configuration.
pub fn evaluate(
    img: &RasterImage,
    gold: &BinaryMask,
    prototypes: &[Point],
    config: SegmenterConfig,
) -> Result<(BinaryMask, f64)> {
    let bank = train(img, prototypes, config)?;
    let mask = segment(&bank, img)?;
    let ba = score(&mask, gold)?;
    Ok((mask, ba))
}

/// Balanced accuracy at every value of the swept parameter, in the given order.
pub fn sweep(
    img: &RasterImage,
    gold: &BinaryMask,
    prototypes: &[Point],
    spec: &SweepSpec,
) -> Result<Vec<SweepPoint>> {
    let configs = spec.configs()?;
    if spec.parameter == Parameter::Threshold {
        // Scores do not depend on T: compute them once.
        let scores = train(img, prototypes, spec.base)?.score_map(img)?;
        return configs
            .iter()
            .map(|cfg| {
                Ok(SweepPoint {
                    value: cfg.threshold,
                    ba: score(&scores.threshold(cfg.threshold), gold)?,
                })
            })
            .collect();
    }
    spec.values
        .iter()
        .zip(configs)
        .map(|(value, cfg)| {
            Ok(SweepPoint {
                value: *value,
                ba: evaluate(img, gold, prototypes, cfg)?.1,
            })
        })
        .collect()
}

/// Candidate values per parameter for an exhaustive search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterGrid {
    #[serde(rename = "D")]
    pub selectivity: Vec<f64>,
    #[serde(rename = "T")]
    pub threshold: Vec<f64>,
    #[serde(rename = "r")]
    pub radius: Vec<u32>,
    #[serde(rename = "a")]
    pub decay: Vec<f64>,
}

impl Default for ParameterGrid {
    /// D in {0.5, 1, ..., 4}, T in {0.05, 0.10, ..., 0.95}, r in {1, ..., 6},
    /// a in {0, 1/5000, 1/1000, 1/100, 1/10}.
    fn default() -> Self {
        ParameterGrid {
            selectivity: (1..=8).map(|i| i as f64 * 0.5).collect(),
            threshold: (1..=19).map(|i| i as f64 * 0.05).collect(),
            radius: (1..=6).collect(),
            decay: vec![0.0, 1.0 / 5000.0, 1.0 / 1000.0, 1.0 / 100.0, 1.0 / 10.0],
        }
    }
}

fn sorted_unique(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl ParameterGrid {
    pub fn len(&self) -> usize {
        self.selectivity.len() * self.threshold.len() * self.radius.len() * self.decay.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub config: SegmenterConfig,
    pub ba: f64,
    pub evaluated: usize,
}

/// Exhaustive search over the Cartesian product of the grid. Ties go to the
/// lexicographically smallest `(D, T, r, a)`.
pub fn grid_search(
    img: &RasterImage,
    gold: &BinaryMask,
    prototypes: &[Point],
    grid: &ParameterGrid,
) -> Result<GridResult> {
    if grid.is_empty() {
        return Err(Error::Parameter(
            "every grid axis needs at least one value".into(),
        ));
    }
    let ds = sorted_unique(&grid.selectivity);
    let ts = sorted_unique(&grid.threshold);
    let as_ = sorted_unique(&grid.decay);
    let mut rs = grid.radius.clone();
    rs.sort_unstable();
    rs.dedup();

    // (D, T, r, a) -> BA, filled in lexicographic order.
    let mut results: Vec<(SegmenterConfig, f64)> =
        Vec::with_capacity(ds.len() * ts.len() * rs.len() * as_.len());
    let probe = |d, r, a| SegmenterConfig {
        selectivity: d,
        threshold: 0.0,
        radius: r,
        decay: a,
    };
    let mut banks = Vec::with_capacity(rs.len());
    for &r in &rs {
        banks.push(train(img, prototypes, probe(ds[0], r, as_[0]))?);
    }
    let mut maps = Vec::new();
    for &d in &ds {
        for (bank, &r) in banks.iter().zip(&rs) {
            for &a in &as_ {
                maps.push(((d, r, a), bank.with_config(probe(d, r, a))?.score_map(img)?));
            }
        }
    }
    for &d in &ds {
        for &t in &ts {
            for ((md, r, a), map) in &maps {
                if *md != d {
                    continue;
                }
                let cfg = SegmenterConfig {
                    selectivity: d,
                    threshold: t,
                    radius: *r,
                    decay: *a,
                };
                cfg.validate()?;
                results.push((cfg, score(&map.threshold(t), gold)?));
            }
        }
    }
    let evaluated = results.len();
    let (config, ba) = results
        .into_iter()
        .reduce(|best, cur| if cur.1 > best.1 { cur } else { best })
        .expect("nonempty grid");
    Ok(GridResult {
        config,
        ba,
        evaluated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene() -> (RasterImage, BinaryMask, Vec<Point>) {
        let gold = BinaryMask::from_fn(32, 32, |r, c| (8..24).contains(&r) && (8..24).contains(&c));
        let samples = gold
            .bits()
            .iter()
            .map(|b| if *b { 165.0 / 255.0 } else { 65.0 / 255.0 })
            .collect();
        (
            RasterImage::gray(32, 32, samples).unwrap(),
            gold,
            vec![Point::new(16, 16)],
        )
    }

    #[test]
    fn parameter_names() {
        for p in ["D", "T", "r", "a"] {
            assert_eq!(p.parse::<Parameter>().unwrap().symbol(), p);
        }
        assert!("x".parse::<Parameter>().is_err());
        assert!(Parameter::Radius
            .apply(SegmenterConfig::default(), 2.5)
            .is_err());
        assert!(Parameter::Threshold
            .apply(SegmenterConfig::default(), 1.5)
            .is_err());
    }

    #[test]
    fn single_value_sweep_matches_base() {
        let (img, gold, protos) = scene();
        let base = SegmenterConfig::SYNTHETIC;
        let (_, ba) = evaluate(&img, &gold, &protos, base).unwrap();
        for p in [
            Parameter::Selectivity,
            Parameter::Threshold,
            Parameter::Radius,
            Parameter::Decay,
        ] {
            let value = match p {
                Parameter::Selectivity => base.selectivity,
                Parameter::Threshold => base.threshold,
                Parameter::Radius => base.radius as f64,
                Parameter::Decay => base.decay,
            };
            let pts = sweep(
                &img,
                &gold,
                &protos,
                &SweepSpec {
                    parameter: p,
                    values: vec![value],
                    base,
                },
            )
            .unwrap();
            assert_eq!(pts, vec![SweepPoint { value, ba }]);
        }
    }

    #[test]
    fn grid_of_one_and_tie_breaking() {
        let (img, gold, protos) = scene();
        let one = ParameterGrid {
            selectivity: vec![2.0],
            threshold: vec![0.85],
            radius: vec![4],
            decay: vec![0.0],
        };
        let res = grid_search(&img, &gold, &protos, &one).unwrap();
        assert_eq!(
            res.config,
            SegmenterConfig {
                decay: 0.0,
                ..SegmenterConfig::SYNTHETIC
            }
        );
        assert_eq!(res.evaluated, 1);

        // r = 0 reproduces the gold exactly at any T above the background score;
        // both T values tie at BA 1, the smaller wins.
        let grid = ParameterGrid {
            selectivity: vec![1.0],
            threshold: vec![0.9, 0.8],
            radius: vec![0],
            decay: vec![0.0],
        };
        let res = grid_search(&img, &gold, &protos, &grid).unwrap();
        assert_eq!(res.ba, 1.0);
        assert_eq!(res.config.threshold, 0.8);
    }

    #[test]
    fn perfect_config_wins() {
        let (img, gold, protos) = scene();
        let grid = ParameterGrid {
            selectivity: vec![1.0],
            threshold: vec![0.1, 0.9],
            radius: vec![0],
            decay: vec![0.0],
        };
        let res = grid_search(&img, &gold, &protos, &grid).unwrap();
        assert_eq!((res.config.threshold, res.ba), (0.9, 1.0));
    }

    #[test]
    fn empty_grid_is_rejected() {
        let (img, gold, protos) = scene();
        let grid = ParameterGrid {
            radius: vec![],
            ..ParameterGrid::default()
        };
        assert!(grid_search(&img, &gold, &protos, &grid).is_err());
    }
}
