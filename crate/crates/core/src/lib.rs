//! Supervised image segmentation with coincidence-similarity multiset neurons.
//!
//! * [`similarity`]: Jaccard, interiority and coincidence indices on multisets.
//! * [`imagekit`]: rasters, masks, colour conversion, cross morphology, PNG/PNM IO.
//! * [`segmenter`]: prototype training, scoring and thresholding.
//! * [`synthgen`]: seeded synthetic texture benchmarks with gold standards.
//! * [`evalsweep`]: balanced accuracy, parameter sweeps, grid search, benchmark runs.
//! * [`formats`]: JSON documents shared by the command line and the HTTP service.

pub mod error;
pub mod evalsweep;
pub mod formats;
pub mod imagekit;
pub mod segmenter;
pub mod similarity;
pub mod synthgen;

pub use error::{Error, Result};
pub use imagekit::{BinaryMask, ColorSpace, Point, RasterImage};
pub use segmenter::{NeuronBank, SegmenterConfig};
pub use similarity::FeatureVector;
pub use synthgen::{SynthConfig, SynthSample};
