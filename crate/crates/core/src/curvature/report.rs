use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::stats;

use super::{CurvatureError, CurvatureRoot, Rejection, SampleOutcome};

/// Fraction trimmed from each tail for the trimmed mean.
pub const TRIM_FRACTION: f64 = 0.05;

/// Dropped samples by reason.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RejectionCounts {
    pub no_candidate: usize,
    pub triangle_inequality: usize,
    pub root_not_found: usize,
    pub exceeds_max_length: usize,
    pub non_positive_curvature: usize,
    pub degenerate_fit: usize,
}

impl RejectionCounts {
    pub fn record(&mut self, r: Rejection) {
        match r {
            Rejection::NoCandidate => self.no_candidate += 1,
            Rejection::TriangleInequality => self.triangle_inequality += 1,
            Rejection::RootNotFound => self.root_not_found += 1,
            Rejection::ExceedsMaxLength => self.exceeds_max_length += 1,
            Rejection::NonPositiveCurvature => self.non_positive_curvature += 1,
            Rejection::DegenerateFit => self.degenerate_fit += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.no_candidate
            + self.triangle_inequality
            + self.root_not_found
            + self.exceeds_max_length
            + self.non_positive_curvature
            + self.degenerate_fit
    }
}

/// Summary statistics over accepted curvature samples, in sample order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurvatureReport {
    pub estimator: String,
    pub requested: usize,
    pub accepted: usize,
    pub mean: f64,
    pub standard_error: f64,
    pub std_dev: f64,
    pub trimmed_mean: f64,
    pub median: f64,
    pub rejected: RejectionCounts,
    /// Accepted samples whose root scan saw more than one sign change.
    pub multi_root: usize,
    pub samples: Vec<f64>,
}

impl CurvatureReport {
    /// Report over the accepted outcomes. Fails with `TooFewAccepted` when
    /// fewer than `max(10, requested / 100)` were accepted.
    pub fn from_outcomes(estimator: &str, outcomes: &[SampleOutcome]) -> Result<Self, CurvatureError> {
        let mut rejected = RejectionCounts::default();
        let mut samples = Vec::with_capacity(outcomes.len());
        let mut multi_root = 0;
        for o in outcomes {
            match o {
                Ok(CurvatureRoot {
                    curvature,
                    sign_changes,
                }) => {
                    samples.push(*curvature);
                    if *sign_changes > 1 {
                        multi_root += 1;
                    }
                }
                Err(r) => rejected.record(*r),
            }
        }
        let requested = outcomes.len();
        if samples.len() < (requested / 100).max(10) {
            return Err(CurvatureError::TooFewAccepted {
                accepted: samples.len(),
                requested,
            });
        }
        let mut report = Self::from_samples(estimator, samples);
        report.requested = requested;
        report.rejected = rejected;
        report.multi_root = multi_root;
        Ok(report)
    }

    /// Report over a non-empty list of curvatures with nothing rejected.
    pub fn from_samples(estimator: &str, samples: Vec<f64>) -> Self {
        assert!(!samples.is_empty(), "report needs at least one sample");
        CurvatureReport {
            estimator: estimator.to_string(),
            requested: samples.len(),
            accepted: samples.len(),
            mean: stats::mean(&samples).unwrap(),
            standard_error: stats::standard_error(&samples).unwrap_or(0.0),
            std_dev: stats::sample_std_dev(&samples).unwrap_or(0.0),
            trimmed_mean: stats::trimmed_mean(&samples, TRIM_FRACTION).unwrap(),
            median: stats::median(&samples).unwrap(),
            rejected: RejectionCounts::default(),
            multi_root: 0,
            samples,
        }
    }

    /// JSON form, with the sample list only when asked for.
    pub fn to_json(&self, include_samples: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !include_samples {
            v.as_object_mut().unwrap().remove("samples");
        }
        v
    }

    /// One curvature per row under a `k` header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k\n");
        for k in &self.samples {
            out.push_str(&format!("{k:e}\n"));
        }
        out
    }
}
