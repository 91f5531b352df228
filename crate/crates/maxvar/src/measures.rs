//! Discrete probability measures on point clouds.
//!
//! Weights are validated, clipped of rounding-level negatives, and
//! renormalized on construction. Construction is a projection: feeding the
//! stored weights back in reproduces them bit for bit, which keeps
//! serialized measures stable across round trips.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spaces::PointCloud;

/// Weights this far below zero are treated as rounding noise and clipped;
/// anything more negative is rejected.
const NEGATIVE_CLIP_TOL: f64 = 1e-12;
/// Default support threshold. LP solutions carry ~1e-10 noise, so weights
/// below this are considered zero.
pub const SUPPORT_EPS: f64 = 1e-9;

/// Nonnegative weights on a point cloud summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    cloud: Arc<PointCloud>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(cloud: Arc<PointCloud>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != cloud.len() {
            return Err(Error::DimensionMismatch { expected: cloud.len(), got: weights.len() });
        }
        let mut w = weights;
        let mut total = 0.0;
        for v in w.iter_mut() {
            if !v.is_finite() {
                return Err(Error::InvalidMeasure("non-finite weight".into()));
            }
            if *v < 0.0 {
                if *v < -NEGATIVE_CLIP_TOL {
                    return Err(Error::InvalidMeasure(format!(
                        "weight {v} is negative beyond tolerance"
                    )));
                }
                *v = 0.0;
            }
            total += *v;
        }
        if total <= 0.0 {
            return Err(Error::InvalidMeasure("total mass must be positive".into()));
        }
        canonicalize(&mut w, total);
        Ok(DiscreteMeasure { cloud, weights: w })
    }

    /// Equal weights on every point.
    pub fn uniform(cloud: Arc<PointCloud>) -> Self {
        let n = cloud.len();
        DiscreteMeasure::new(cloud, vec![1.0; n]).expect("uniform weights are valid")
    }

    /// Unit mass at one index.
    pub fn dirac(cloud: Arc<PointCloud>, index: usize) -> Result<Self> {
        if index >= cloud.len() {
            return Err(Error::InvalidMeasure(format!(
                "dirac index {index} out of range for cloud of size {}",
                cloud.len()
            )));
        }
        let mut w = vec![0.0; cloud.len()];
        w[index] = 1.0;
        DiscreteMeasure::new(cloud, w)
    }

    pub fn cloud(&self) -> &Arc<PointCloud> {
        &self.cloud
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Indices carrying more than `eps` mass, in increasing order.
    pub fn support(&self, eps: f64) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > eps)
            .map(|(i, _)| i)
            .collect()
    }

    /// True when both measures refer to the same cloud (pointer identity or
    /// structural equality).
    pub fn same_cloud(&self, other: &DiscreteMeasure) -> bool {
        Arc::ptr_eq(&self.cloud, &other.cloud) || self.cloud == other.cloud
    }
}

/// Renormalizes in place so the weights sum to one. Division is skipped when
/// the sum is already within 1e-9 of one; the residual is then absorbed into
/// the last weight, which is recomputed as exactly 1 minus the sum of the
/// others. Because the repair depends only on the entries it does not touch,
/// feeding the output back in reproduces it bit for bit.
fn canonicalize(w: &mut [f64], total: f64) {
    if (total - 1.0).abs() > 1e-9 {
        for v in w.iter_mut() {
            *v /= total;
        }
    }
    let n = w.len();
    if n == 1 {
        w[0] = 1.0;
        return;
    }
    let rest: f64 = w[..n - 1].iter().sum();
    w[n - 1] = (1.0 - rest).max(0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{ModelSpace, Point, PointCloud};
    use proptest::prelude::*;

    fn line_cloud(n: usize) -> Arc<PointCloud> {
        let s = ModelSpace::euclidean(1).unwrap();
        let pts = (0..n).map(|i| Point::coords(vec![i as f64])).collect();
        Arc::new(PointCloud::new(s, pts).unwrap())
    }

    #[test]
    fn uniform_on_four_points() {
        let m = DiscreteMeasure::uniform(line_cloud(4));
        assert_eq!(m.weights(), &[0.25, 0.25, 0.25, 0.25]);
    }

    #[test]
    fn dirac_at_index() {
        let m = DiscreteMeasure::dirac(line_cloud(3), 2).unwrap();
        assert_eq!(m.weights(), &[0.0, 0.0, 1.0]);
        assert!(DiscreteMeasure::dirac(line_cloud(3), 3).is_err());
    }

    #[test]
    fn weights_renormalize() {
        let m = DiscreteMeasure::new(line_cloud(2), vec![1.0, 3.0]).unwrap();
        assert_eq!(m.weights(), &[0.25, 0.75]);
    }

    #[test]
    fn negative_noise_clipped_real_negatives_rejected() {
        let m = DiscreteMeasure::new(line_cloud(2), vec![-1e-13, 1.0]).unwrap();
        assert_eq!(m.weights(), &[0.0, 1.0]);
        assert!(DiscreteMeasure::new(line_cloud(2), vec![-1e-6, 1.0]).is_err());
        assert!(DiscreteMeasure::new(line_cloud(2), vec![0.0, 0.0]).is_err());
        assert!(DiscreteMeasure::new(line_cloud(2), vec![1.0]).is_err());
    }

    #[test]
    fn support_thresholding() {
        let m = DiscreteMeasure::new(line_cloud(3), vec![0.5, 0.5, 0.0]).unwrap();
        assert_eq!(m.support(SUPPORT_EPS), vec![0, 1]);

        let m = DiscreteMeasure::dirac(line_cloud(3), 0).unwrap();
        assert_eq!(m.support(SUPPORT_EPS), vec![0]);

        let m = DiscreteMeasure::new(line_cloud(2), vec![1e-12, 1.0 - 1e-12]).unwrap();
        assert_eq!(m.support(SUPPORT_EPS), vec![1]);
    }

    #[test]
    fn support_of_uniform_has_full_size() {
        for n in [1usize, 10, 1000] {
            let m = DiscreteMeasure::uniform(line_cloud(n));
            assert_eq!(m.support(SUPPORT_EPS).len(), n);
        }
    }

    proptest! {
        #[test]
        fn construction_is_idempotent(raw in proptest::collection::vec(0.0f64..1.0, 1..12)) {
            prop_assume!(raw.iter().sum::<f64>() > 1e-9);
            let cloud = line_cloud(raw.len());
            let once = DiscreteMeasure::new(cloud.clone(), raw).unwrap();
            let twice = DiscreteMeasure::new(cloud, once.weights().to_vec()).unwrap();
            prop_assert_eq!(once.weights(), twice.weights());
        }

        #[test]
        fn weights_sum_to_one(raw in proptest::collection::vec(0.0f64..100.0, 1..12)) {
            prop_assume!(raw.iter().sum::<f64>() > 1e-9);
            let m = DiscreteMeasure::new(line_cloud(raw.len()), raw).unwrap();
            let total: f64 = m.weights().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
            prop_assert!(m.weights().iter().all(|&w| w >= 0.0));
        }
    }
}
