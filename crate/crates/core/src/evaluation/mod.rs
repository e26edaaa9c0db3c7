//! ROC metrics, classifier training configs, and security curves (metric
//! against attack strength, averaged over folds).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classifiers::{decision_score, Score, TrainedModel};
use crate::data::{Dataset, Label};
use crate::error::{Error, Result};

mod roc;
mod sweep;
mod train;

pub use roc::{
    auc10, far_at_gar, partial_auc, rates_at_threshold, roc, roc_biometric, FarAtGar, RocCurve,
};
pub use sweep::{
    build_phase_dataset, plain_evaluation, security_sweep, Construction, RocEntry, SweepOptions,
    SweepResult,
};
pub use train::{select_c, train_classifier, ClassifierConfig};

/// Performance measure reported by a security curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Metric {
    /// Area under the ROC curve for FP rates in [0, 0.1].
    Auc10,
    /// FAR at the given GAR on the biometric ROC.
    FarAtGar { gar: f64 },
}

impl Metric {
    pub fn name(&self) -> String {
        match self {
            Metric::Auc10 => "auc10".into(),
            Metric::FarAtGar { gar } => format!("far_at_gar_{gar}"),
        }
    }

    pub fn is_biometric(&self) -> bool {
        matches!(self, Metric::FarAtGar { .. })
    }

    pub fn curve(&self, scores: &[(Score, Label)]) -> Result<RocCurve> {
        if self.is_biometric() {
            roc_biometric(scores)
        } else {
            roc(scores)
        }
    }
}

pub fn score_dataset(model: &TrainedModel, data: &Dataset) -> Result<Vec<(Score, Label)>> {
    data.iter()
        .map(|s| Ok((decision_score(model, &s.features)?, s.label)))
        .collect()
}

pub fn metric_value(metric: Metric, scores: &[(Score, Label)]) -> Result<f64> {
    let curve = metric.curve(scores)?;
    Ok(match metric {
        Metric::Auc10 => auc10(&curve),
        Metric::FarAtGar { gar } => {
            if !(gar > 0.0 && gar <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "GAR must lie in (0, 1], got {gar}"
                )));
            }
            let r = far_at_gar(&curve, gar);
            if !r.reachable {
                log::warn!("GAR {gar} is not reachable; reporting FAR 1");
            }
            r.far
        }
    })
}

/// Metric mean and standard deviation (n - 1 denominator) per strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecurityCurve {
    pub parameter: String,
    pub strengths: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// Measurements per strength (folds times repetitions).
    pub k: usize,
    /// Raw measurements, one row per strength, in fold order.
    pub measurements: Vec<Vec<f64>>,
}

impl SecurityCurve {
    pub fn from_measurements(
        parameter: impl Into<String>,
        strengths: Vec<f64>,
        measurements: Vec<Vec<f64>>,
    ) -> Self {
        let k = measurements.first().map_or(0, Vec::len);
        let (mean, std) = measurements.iter().map(|row| mean_std(row)).unzip();
        Self {
            parameter: parameter.into(),
            strengths,
            mean,
            std,
            k,
            measurements,
        }
    }

    /// `strength,mean,std,k`, one row per strength.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("strength,mean,std,k\n");
        for i in 0..self.strengths.len() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                self.strengths[i], self.mean[i], self.std[i], self.k
            );
        }
        out
    }

    pub fn at(&self, strength: f64) -> Option<(f64, f64)> {
        self.strengths
            .iter()
            .position(|&s| s == strength)
            .map(|i| (self.mean[i], self.std[i]))
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

/// Everything needed to interpret and reproduce one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub version: u32,
    pub scenario: String,
    pub classifier: String,
    pub classifier_config: ClassifierConfig,
    pub metric: Metric,
    pub seed: u64,
    pub folds: usize,
    pub repetitions: usize,
    pub curve: SecurityCurve,
    #[serde(default)]
    pub rocs: Vec<RocEntry>,
    /// Scenario configuration the report was produced from.
    #[serde(default)]
    pub config: Option<String>,
    pub elapsed_seconds: f64,
}

pub const REPORT_VERSION: u32 = 1;

impl EvaluationReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::ModelFormat(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))
    }
}
