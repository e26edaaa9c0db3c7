//! Trainers and deciders: linear SVM, logistic regression, one-class nu-SVM
//! with RBF kernel, and likelihood-ratio score fusion.
//!
//! Every family scores samples on one scale where larger means more
//! malicious; see [`decision_score`].

use serde::{Deserialize, Serialize};

use crate::data::Label;
use crate::error::{Error, Result};

mod fusion;
mod gamma;
pub mod kernel;
mod linear_svm;
mod logistic;
mod one_class;
mod smo;

pub use fusion::{fit_gamma_product, llr_decide, llr_score, FusionModel, LlrDecision};
pub use gamma::{digamma, fit_gamma, gamma_loglik_gradient, trigamma, GammaParams, ZERO_SHIFT};
pub use linear_svm::{fit_linear_svm, train_linear_svm, LinearSvmFit};
pub use logistic::{
    logistic_gradient, logistic_loss, train_logistic_regression, LogisticConfig,
};
pub use one_class::{fit_one_class_svm, train_one_class_svm, OneClassFit, OneClassModel};

/// Version written into serialized model documents.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// g(x) = w'x + w0. Positive g means malicious.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn new(weights: Vec<f64>, bias: f64) -> Self {
        Self { weights, bias }
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn discriminant(&self, x: &[f64]) -> f64 {
        kernel::dot(&self.weights, x) + self.bias
    }
}

/// Larger is more malicious.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Score(pub f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "parameters", rename_all = "snake_case")]
pub enum TrainedModel {
    Linear(LinearModel),
    OneClass(OneClassModel),
    Fusion(FusionModel),
}

impl TrainedModel {
    pub fn dimension(&self) -> usize {
        match self {
            TrainedModel::Linear(m) => m.dimension(),
            TrainedModel::OneClass(m) => m.dimension(),
            TrainedModel::Fusion(_) => 2,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            TrainedModel::Linear(_) => "linear",
            TrainedModel::OneClass(_) => "one_class",
            TrainedModel::Fusion(_) => "fusion",
        }
    }

    pub fn as_linear(&self) -> Option<&LinearModel> {
        match self {
            TrainedModel::Linear(m) => Some(m),
            _ => None,
        }
    }

    /// Native decision rule of each family.
    ///
    /// Linear: legitimate iff g(x) < 0. One-class: legitimate iff f(x) >= 0.
    /// Fusion: legitimate iff ratio >= t.
    pub fn decide(&self, x: &[f64]) -> Result<Label> {
        let s = decision_score(self, x)?.0;
        Ok(match self {
            TrainedModel::Linear(_) => {
                if s < 0.0 {
                    Label::Legitimate
                } else {
                    Label::Malicious
                }
            }
            TrainedModel::OneClass(_) => {
                if s <= 0.0 {
                    Label::Legitimate
                } else {
                    Label::Malicious
                }
            }
            TrainedModel::Fusion(m) => llr_decide(m, x).label,
        })
    }

    pub fn to_document(&self) -> Result<String> {
        let doc = ModelDocument {
            version: MODEL_FORMAT_VERSION,
            dimension: self.dimension(),
            model: self.clone(),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::ModelFormat(e.to_string()))
    }

    pub fn from_document(text: &str) -> Result<Self> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))?;
        if doc.version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported model version {}",
                doc.version
            )));
        }
        if doc.dimension != doc.model.dimension() {
            return Err(Error::ModelFormat(format!(
                "declared dimension {} does not match parameters ({})",
                doc.dimension,
                doc.model.dimension()
            )));
        }
        Ok(doc.model)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    version: u32,
    dimension: usize,
    #[serde(flatten)]
    model: TrainedModel,
}

/// Uniform scoring: g(x) for linear models, rho - f(x) for one-class
/// models, log t - log(ratio) for fusion.
pub fn decision_score(model: &TrainedModel, x: &[f64]) -> Result<Score> {
    let expected = model.dimension();
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: x.len(),
        });
    }
    Ok(match model {
        TrainedModel::Linear(m) => Score(m.discriminant(x)),
        TrainedModel::OneClass(m) => Score(-m.decision_function(x)),
        TrainedModel::Fusion(m) => {
            Score((llr_score(m, x).0 + m.threshold.ln()).clamp(f64::MIN, f64::MAX))
        }
    })
}
