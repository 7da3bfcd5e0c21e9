use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagekit::BinaryMask;

/// Pixel counts of a prediction against a gold standard, gold object = positive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

pub fn confusion(pred: &BinaryMask, gold: &BinaryMask) -> Result<ConfusionCounts> {
    pred.check_shape(gold)?;
    let mut c = ConfusionCounts::default();
    for (p, g) in pred.bits().iter().zip(gold.bits()) {
        match (*p, *g) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// Mean of sensitivity and specificity. Undefined, and an error, when the
/// gold standard lacks either class.
pub fn balanced_accuracy(c: &ConfusionCounts) -> Result<f64> {
    let positives = c.tp + c.fn_;
    let negatives = c.tn + c.fp;
    if positives == 0 || negatives == 0 {
        return Err(Error::UndefinedClass {
            positives,
            negatives,
        });
    }
    Ok(0.5 * c.tp as f64 / positives as f64 + 0.5 * c.tn as f64 / negatives as f64)
}

/// Balanced accuracy of `pred` against `gold`.
pub fn score(pred: &BinaryMask, gold: &BinaryMask) -> Result<f64> {
    balanced_accuracy(&confusion(pred, gold)?)
}
