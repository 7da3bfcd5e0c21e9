//! Similarity indices between real-valued multisets.
//!
//! All indices compare components position by position, in the order given.
//! Callers that want permutation invariance sort first.
//!
//! Zero denominators are not covered by the usual definitions, which assume
//! strictly positive multisets. Here a pair of all-zero multisets is treated
//! as identical (every index is 1), while a zero denominator with unequal
//! inputs yields 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonnegative multiset stored as an ordered list of multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parameter("feature vector must not be empty".into()));
        }
        if let Some((i, v)) = components
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::Parameter(format!(
                "feature component {i} is {v}; components must be finite and nonnegative"
            )));
        }
        Ok(FeatureVector(components))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        FeatureVector::new(v)
    }
}

impl From<FeatureVector> for Vec<f64> {
    fn from(v: FeatureVector) -> Self {
        v.0
    }
}

impl AsRef<[f64]> for FeatureVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// The four sums every index is built from, accumulated in one pass in index order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct OverlapSums {
    pub min_sum: f64,
    pub max_sum: f64,
    pub x_sum: f64,
    pub y_sum: f64,
}

impl OverlapSums {
    pub fn of(x: &[f64], y: &[f64]) -> Self {
        debug_assert_eq!(x.len(), y.len());
        let mut s = OverlapSums {
            min_sum: 0.0,
            max_sum: 0.0,
            x_sum: 0.0,
            y_sum: 0.0,
        };
        for (&a, &b) in x.iter().zip(y) {
            s.min_sum += a.min(b);
            s.max_sum += a.max(b);
            s.x_sum += a;
            s.y_sum += b;
        }
        s
    }

    pub fn jaccard(&self) -> f64 {
        if self.max_sum == 0.0 {
            // Both multisets are empty.
            1.0
        } else {
            self.min_sum / self.max_sum
        }
    }

    pub fn interiority(&self) -> f64 {
        let smaller = self.x_sum.min(self.y_sum);
        if smaller == 0.0 {
            if self.max_sum == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            self.min_sum / smaller
        }
    }

    pub fn coincidence(&self, selectivity: f64) -> f64 {
        self.jaccard().powf(selectivity) * self.interiority()
    }
}

fn sums(x: &FeatureVector, y: &FeatureVector) -> Result<OverlapSums> {
    if x.len() != y.len() {
        return Err(Error::dimension(
            format!("{} components", x.len()),
            format!("{} components", y.len()),
        ));
    }
    Ok(OverlapSums::of(x.as_slice(), y.as_slice()))
}

pub(crate) fn check_selectivity(d: f64) -> Result<()> {
    if d.is_finite() && d >= 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "selectivity exponent must be finite and nonnegative, got {d}"
        )))
    }
}

/// Jaccard index: sum of componentwise minima over sum of componentwise maxima.
pub fn jaccard(x: &FeatureVector, y: &FeatureVector) -> Result<f64> {
    Ok(sums(x, y)?.jaccard())
}

/// Interiority (overlap) index: sum of componentwise minima over the smaller total.
pub fn interiority(x: &FeatureVector, y: &FeatureVector) -> Result<f64> {
    Ok(sums(x, y)?.interiority())
}

/// Coincidence similarity `jaccard^D * interiority`. Larger `selectivity`
/// makes the comparison stricter; `selectivity = 1` gives the plain product.
pub fn coincidence(x: &FeatureVector, y: &FeatureVector, selectivity: f64) -> Result<f64> {
    check_selectivity(selectivity)?;
    Ok(sums(x, y)?.coincidence(selectivity))
}
