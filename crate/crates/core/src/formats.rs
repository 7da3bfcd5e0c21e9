//! JSON documents read by the command line and the HTTP service.
//!
//! Prototype files are lists of `[row, col]` integer pairs with a top-left
//! origin. Documents that carry a `prototypes` field (a generated sample's
//! `prototypes.json`, a session export) are accepted as well.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagekit::Point;
use crate::segmenter::SegmenterConfig;

#[derive(Deserialize)]
#[serde(untagged)]
enum PrototypeDocument {
    List(Vec<Point>),
    Wrapped { prototypes: Vec<Point> },
}

pub fn parse_prototypes(text: &str) -> Result<Vec<Point>> {
    let doc: PrototypeDocument = serde_json::from_str(text).map_err(|e| {
        Error::Parameter(format!(
            "prototype file must be a list of [row, col] pairs: {e}"
        ))
    })?;
    Ok(match doc {
        PrototypeDocument::List(v) => v,
        PrototypeDocument::Wrapped { prototypes } => prototypes,
    })
}

pub fn parse_segmenter_config(text: &str) -> Result<SegmenterConfig> {
    SegmenterConfig::from_json(text)
}

/// Prototypes plus configuration: enough to reproduce a segmentation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionExport {
    pub prototypes: Vec<Point>,
    pub config: SegmenterConfig,
}

impl SessionExport {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
