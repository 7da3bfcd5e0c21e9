//! Prototype-neuron segmentation.
//!
//! Training turns each prototype pixel into a neuron whose weights are the
//! sorted samples of a circular window around it. Recognition scores every
//! pixel against every neuron, averaging the coincidence similarity of the
//! windows with an exponential distance relevance, and marks the pixel as
//! object when the best neuron reaches the threshold.

mod bank;
mod config;
mod features;

pub use bank::{pixel_score, segment, train, NeuronBank, PrototypeNeuron, ScoreMap};
pub use config::SegmenterConfig;
pub use features::{extract_features, window_offsets, window_size};

/// `e^(-distance * decay)`: 1 at the prototype, falling off with distance in pixels.
pub fn distance_relevance(distance: f64, decay: f64) -> f64 {
    (-(distance * decay)).exp()
}
