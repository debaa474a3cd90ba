use num_complex::Complex64;

use crate::assignment::{bottleneck_assignment, CostMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct MatchedPair {
    pub predicted: usize,
    pub observed: usize,
    pub distance: f64,
}

/// Predicted versus observed outliers of one realization.
#[derive(Clone, Debug, PartialEq)]
pub struct OutlierReport {
    pub predicted: Vec<Complex64>,
    pub observed: Vec<Complex64>,
    /// Partial bijection between `predicted` and `observed`, sorted by
    /// predicted index.
    pub pairs: Vec<MatchedPair>,
    pub unmatched_predicted: Vec<Complex64>,
    pub unmatched_observed: Vec<Complex64>,
    /// Detection threshold used for `observed` (0 when not set).
    pub threshold: f64,
}

impl OutlierReport {
    pub fn max_distance(&self) -> f64 {
        self.pairs.iter().map(|p| p.distance).fold(0.0, f64::max)
    }

    /// Every prediction matched and nothing unexplained observed.
    pub fn is_complete(&self) -> bool {
        self.unmatched_predicted.is_empty() && self.unmatched_observed.is_empty()
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }
}

/// Pairs predictions with observations so that the largest distance is
/// minimal; leftovers on either side are reported as unmatched.
pub fn match_outliers(predicted: &[Complex64], observed: &[Complex64]) -> OutlierReport {
    let costs = CostMatrix::from_fn(predicted.len(), observed.len(), |i, j| {
        (predicted[i] - observed[j]).norm()
    })
    .expect("outlier locations are finite");
    let assignment = bottleneck_assignment(&costs);
    let pairs: Vec<MatchedPair> = assignment
        .iter()
        .map(|&(i, j)| MatchedPair {
            predicted: i,
            observed: j,
            distance: costs.get(i, j),
        })
        .collect();
    let unmatched = |len: usize, used: Vec<usize>, src: &[Complex64]| {
        (0..len).filter(|i| !used.contains(i)).map(|i| src[i]).collect()
    };
    OutlierReport {
        unmatched_predicted: unmatched(predicted.len(), pairs.iter().map(|p| p.predicted).collect(), predicted),
        unmatched_observed: unmatched(observed.len(), pairs.iter().map(|p| p.observed).collect(), observed),
        predicted: predicted.to_vec(),
        observed: observed.to_vec(),
        pairs,
        threshold: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_pair() {
        let r = match_outliers(&[c(2.0, 0.0)], &[c(2.03, 0.0)]);
        assert_eq!(r.pairs.len(), 1);
        assert!((r.pairs[0].distance - 0.03).abs() < 1e-12);
        assert!(r.is_complete());
    }

    #[test]
    fn unmatched_observation() {
        let r = match_outliers(&[], &[c(1.5, 0.0)]);
        assert!(r.pairs.is_empty());
        assert_eq!(r.unmatched_observed, vec![c(1.5, 0.0)]);
    }

    #[test]
    fn recovers_permutation() {
        let p = [c(-2.0, 0.0), c(2.0, 0.0), c(-1.0, 1.0)];
        let shift = c(0.01, -0.02);
        let o = [p[2] + shift, p[0] + shift, p[1] + shift];
        let r = match_outliers(&p, &o);
        let perm: Vec<usize> = r.pairs.iter().map(|x| x.observed).collect();
        assert_eq!(perm, vec![1, 2, 0]);
        assert!((r.max_distance() - shift.norm()).abs() < 1e-12);
    }
}
