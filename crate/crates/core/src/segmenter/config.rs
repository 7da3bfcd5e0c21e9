use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four segmentation parameters. JSON field names are `D`, `T`, `r`, `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct SegmenterConfig {
    /// Exponent on the Jaccard factor; larger is stricter.
    #[serde(rename = "D")]
    pub selectivity: f64,
    /// Inclusive score threshold in `[0, 1]`.
    #[serde(rename = "T")]
    pub threshold: f64,
    /// Feature window radius in pixels.
    #[serde(rename = "r")]
    pub radius: u32,
    /// Distance decay rate per pixel.
    #[serde(rename = "a")]
    pub decay: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "D")]
    selectivity: f64,
    #[serde(rename = "T")]
    threshold: f64,
    #[serde(rename = "r")]
    radius: u32,
    #[serde(rename = "a")]
    decay: f64,
}

impl TryFrom<RawConfig> for SegmenterConfig {
    type Error = Error;

    fn try_from(raw: RawConfig) -> Result<Self> {
        let cfg = SegmenterConfig {
            selectivity: raw.selectivity,
            threshold: raw.threshold,
            radius: raw.radius,
            decay: raw.decay,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Largest accepted window radius.
pub const MAX_RADIUS: u32 = 64;

impl SegmenterConfig {
    /// Settings tuned on object samples of a colour photograph: D=2, T=0.55, r=3, a=1/5000.
    pub const OBJECT_SAMPLES: SegmenterConfig = SegmenterConfig {
        selectivity: 2.0,
        threshold: 0.55,
        radius: 3,
        decay: 1.0 / 5000.0,
    };

    /// Settings used on the synthetic texture benchmark: D=2, T=0.85, r=4, a=1/5000.
    pub const SYNTHETIC: SegmenterConfig = SegmenterConfig {
        selectivity: 2.0,
        threshold: 0.85,
        radius: 4,
        decay: 1.0 / 5000.0,
    };

    pub fn validate(&self) -> Result<()> {
        crate::similarity::check_selectivity(self.selectivity)?;
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::Parameter(format!(
                "threshold T must lie in [0, 1], got {}",
                self.threshold
            )));
        }
        if !(self.decay.is_finite() && self.decay >= 0.0) {
            return Err(Error::Parameter(format!(
                "decay a must be finite and nonnegative, got {}",
                self.decay
            )));
        }
        if self.radius > MAX_RADIUS {
            return Err(Error::Parameter(format!(
                "radius r must be at most {MAX_RADIUS}, got {}",
                self.radius
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        SegmenterConfig::OBJECT_SAMPLES
    }
}
