use axum::http::StatusCode;
use base64::Engine;
use serde::{Deserialize, Serialize};

use csmnn::evalsweep::score;
use csmnn::formats::SessionExport;
use csmnn::imagekit::{io, rgb_to_gray, rgb_to_hsv};
use csmnn::segmenter::train;
use csmnn::{BinaryMask, ColorSpace, Point, RasterImage, SegmenterConfig};

use crate::ApiError;

/// How an uploaded colour image is presented to the segmenter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// As decoded: gray stays gray, colour stays RGB.
    #[default]
    Native,
    Gray,
    Hsv,
}

impl Space {
    /// Converts a decoded image; gray inputs are left alone.
    pub fn apply(self, img: RasterImage) -> csmnn::Result<RasterImage> {
        match (self, img.space()) {
            (Space::Gray, ColorSpace::Rgb) => rgb_to_gray(&img),
            (Space::Hsv, ColorSpace::Rgb) => rgb_to_hsv(&img),
            _ => Ok(img),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentReply {
    /// Base64 PNG, 8-bit gray with values {0, 255}.
    pub mask_png: String,
    pub width: usize,
    pub height: usize,
    pub object_pixels: usize,
    pub score_stats: ScoreStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ba: Option<f64>,
    pub config: SegmenterConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub prototypes: Vec<Point>,
    pub config: SegmenterConfig,
    pub has_gold: bool,
    pub last_ba: Option<f64>,
}

/// State of one interactive session.
pub struct Session {
    image: RasterImage,
    prototypes: Vec<Point>,
    config: SegmenterConfig,
    gold: Option<BinaryMask>,
    last: Option<(BinaryMask, Option<f64>)>,
}

fn unprocessable(msg: impl ToString) -> ApiError {
    ApiError(StatusCode::UNPROCESSABLE_ENTITY, msg.to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentBody {
    config: Option<SegmenterConfig>,
}

/// An empty body keeps the session configuration.
pub(crate) fn parse_segment_body(body: &[u8]) -> Result<Option<SegmenterConfig>, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(None);
    }
    let parsed: SegmentBody =
        serde_json::from_slice(body).map_err(|e| unprocessable(format!("invalid config: {e}")))?;
    Ok(parsed.config)
}

impl Session {
    pub fn from_upload(bytes: &[u8], space: Space) -> csmnn::Result<Self> {
        let image = space.apply(io::decode_image(bytes)?)?;
        Ok(Session {
            image,
            prototypes: Vec::new(),
            config: SegmenterConfig::default(),
            gold: None,
            last: None,
        })
    }

    pub fn image(&self) -> &RasterImage {
        &self.image
    }

    pub fn prototypes(&self) -> &[Point] {
        &self.prototypes
    }

    pub fn summary(&self) -> SessionSummary {
        SessionSummary {
            width: self.image.width(),
            height: self.image.height(),
            channels: self.image.channels(),
            prototypes: self.prototypes.clone(),
            config: self.config,
            has_gold: self.gold.is_some(),
            last_ba: self.last.as_ref().and_then(|l| l.1),
        }
    }

    pub fn set_gold(&mut self, bytes: &[u8]) -> Result<(), ApiError> {
        let gold =
            io::decode_mask(bytes).map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.to_string()))?;
        if gold.width() != self.image.width() || gold.height() != self.image.height() {
            return Err(unprocessable(format!(
                "gold is {}x{}, image is {}x{}",
                gold.width(),
                gold.height(),
                self.image.width(),
                self.image.height()
            )));
        }
        self.gold = Some(gold);
        Ok(())
    }

    pub fn add_prototype(&mut self, row: i64, col: i64) -> Result<(), ApiError> {
        let inside = row >= 0
            && col >= 0
            && (row as usize) < self.image.height()
            && (col as usize) < self.image.width();
        if !inside {
            return Err(unprocessable(format!(
                "({row}, {col}) is outside the {}x{} image",
                self.image.height(),
                self.image.width()
            )));
        }
        self.prototypes.push(Point::new(row as u32, col as u32));
        Ok(())
    }

    pub fn remove_prototype(&mut self, k: usize) -> Result<(), ApiError> {
        if k >= self.prototypes.len() {
            return Err(ApiError(StatusCode::NOT_FOUND, format!("no prototype {k}")));
        }
        self.prototypes.remove(k);
        Ok(())
    }

    /// Trains on the current prototypes and segments the image. A supplied
    /// configuration replaces the session's.
    pub fn segment(&mut self, config: Option<SegmenterConfig>) -> Result<SegmentReply, ApiError> {
        let config = config.unwrap_or(self.config);
        config.validate().map_err(unprocessable)?;
        if self.prototypes.is_empty() {
            return Err(ApiError(
                StatusCode::CONFLICT,
                "add at least one prototype first".into(),
            ));
        }
        self.config = config;
        let internal = |e: csmnn::Error| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string());
        let bank = train(&self.image, &self.prototypes, config).map_err(unprocessable)?;
        let scores = bank.score_map(&self.image).map_err(internal)?;
        let mask = scores.threshold(config.threshold);
        let (min, max, mean) = scores.stats();
        let ba = match &self.gold {
            Some(gold) => Some(score(&mask, gold).map_err(unprocessable)?),
            None => None,
        };
        let png = io::encode_mask_png(&mask).map_err(internal)?;
        let reply = SegmentReply {
            mask_png: base64::engine::general_purpose::STANDARD.encode(png),
            width: mask.width(),
            height: mask.height(),
            object_pixels: mask.count_ones(),
            score_stats: ScoreStats { min, max, mean },
            ba,
            config,
        };
        self.last = Some((mask, ba));
        Ok(reply)
    }

    pub fn export(&self) -> SessionExport {
        SessionExport {
            prototypes: self.prototypes.clone(),
            config: self.config,
        }
    }
}
