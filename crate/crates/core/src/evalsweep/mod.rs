//! Scoring segmentations against gold standards, parameter sweeps, grid
//! search and batch benchmark runs.

mod benchmark;
mod metrics;
pub mod plot;
mod sweep;

pub use benchmark::{
    run_benchmark, score_mask_dirs, RunReport, SampleOutcome, HISTOGRAM_BINS, MAX_REDRAWS,
};
pub use metrics::{balanced_accuracy, confusion, score, ConfusionCounts};
pub use sweep::{
    evaluate, grid_search, sweep, GridResult, Parameter, ParameterGrid, SweepPoint, SweepSpec,
};
