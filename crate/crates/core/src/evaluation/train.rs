use serde::{Deserialize, Serialize};

use super::{metric_value, score_dataset, Metric};
use crate::classifiers::{
    fit_gamma_product, train_linear_svm, train_logistic_regression, train_one_class_svm,
    LogisticConfig, TrainedModel,
};
use crate::data::{resample, Dataset, ResampleMethod};
use crate::error::{Error, Result};
use crate::rng::child_seed;

fn default_c_grid() -> Vec<f64> {
    vec![0.01, 0.1, 1.0, 10.0, 100.0]
}

fn default_cv_folds() -> usize {
    5
}

fn default_svm_tolerance() -> f64 {
    1e-3
}

fn default_eta0() -> f64 {
    LogisticConfig::default().eta0
}

fn default_epochs() -> usize {
    LogisticConfig::default().epochs
}

fn default_decay() -> f64 {
    LogisticConfig::default().decay_steps
}

fn default_nu() -> f64 {
    0.01
}

fn default_oc_tolerance() -> f64 {
    1e-6
}

fn default_threshold() -> f64 {
    1.0
}

/// Classifier family and hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassifierConfig {
    /// A fixed `c`, or the `c_grid` value with the best cross-validated AUC10.
    LinearSvm {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
        #[serde(default = "default_c_grid")]
        c_grid: Vec<f64>,
        #[serde(default = "default_cv_folds")]
        cv_folds: usize,
        #[serde(default = "default_svm_tolerance")]
        tolerance: f64,
    },
    LogisticRegression {
        #[serde(default = "default_eta0")]
        eta0: f64,
        #[serde(default = "default_epochs")]
        epochs: usize,
        #[serde(default = "default_decay")]
        decay_steps: f64,
    },
    OneClassSvm {
        #[serde(default = "default_nu")]
        nu: f64,
        gamma: f64,
        #[serde(default = "default_oc_tolerance")]
        tolerance: f64,
    },
    LlrFusion {
        #[serde(default = "default_threshold")]
        threshold: f64,
    },
}

impl ClassifierConfig {
    pub fn linear_svm(c: f64) -> Self {
        ClassifierConfig::LinearSvm {
            c: Some(c),
            c_grid: default_c_grid(),
            cv_folds: default_cv_folds(),
            tolerance: default_svm_tolerance(),
        }
    }

    pub fn linear_svm_grid() -> Self {
        ClassifierConfig::LinearSvm {
            c: None,
            c_grid: default_c_grid(),
            cv_folds: default_cv_folds(),
            tolerance: default_svm_tolerance(),
        }
    }

    pub fn logistic(config: LogisticConfig) -> Self {
        ClassifierConfig::LogisticRegression {
            eta0: config.eta0,
            epochs: config.epochs,
            decay_steps: config.decay_steps,
        }
    }

    pub fn one_class(nu: f64, gamma: f64) -> Self {
        ClassifierConfig::OneClassSvm {
            nu,
            gamma,
            tolerance: default_oc_tolerance(),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ClassifierConfig::LinearSvm { .. } => "linear_svm",
            ClassifierConfig::LogisticRegression { .. } => "logistic_regression",
            ClassifierConfig::OneClassSvm { .. } => "one_class_svm",
            ClassifierConfig::LlrFusion { .. } => "llr_fusion",
        }
    }
}

/// Picks C from `grid` by k-fold cross-validated AUC10 on `train`; ties go
/// to the earlier grid value.
pub fn select_c(
    train: &Dataset,
    grid: &[f64],
    folds: usize,
    tolerance: f64,
    seed: u64,
) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::Config("empty C grid".into()));
    }
    let folds = resample(train, ResampleMethod::CrossValidation { k: folds }, seed)?;
    let mut best: Option<(f64, f64)> = None;
    for &c in grid {
        let mut total = 0.0;
        for (tr, ts) in &folds.pairs {
            let model = TrainedModel::Linear(train_linear_svm(tr, c, tolerance)?);
            total += metric_value(Metric::Auc10, &score_dataset(&model, ts)?)?;
        }
        let mean = total / folds.k() as f64;
        log::debug!("C = {c}: cross-validated AUC10 {mean}");
        if best.is_none_or(|(_, m)| mean > m) {
            best = Some((c, mean));
        }
    }
    Ok(best.map(|(c, _)| c).unwrap_or(grid[0]))
}

/// Trains one model. `seed` drives sample order (logistic regression) and
/// the cross-validation split of C selection.
pub fn train_classifier(
    config: &ClassifierConfig,
    train: &Dataset,
    seed: u64,
) -> Result<TrainedModel> {
    match config {
        ClassifierConfig::LinearSvm {
            c,
            c_grid,
            cv_folds,
            tolerance,
        } => {
            let c = match c {
                Some(c) => *c,
                None => select_c(train, c_grid, *cv_folds, *tolerance, child_seed(seed, 1))?,
            };
            Ok(TrainedModel::Linear(train_linear_svm(train, c, *tolerance)?))
        }
        ClassifierConfig::LogisticRegression {
            eta0,
            epochs,
            decay_steps,
        } => {
            let cfg = LogisticConfig {
                eta0: *eta0,
                epochs: *epochs,
                decay_steps: *decay_steps,
            };
            Ok(TrainedModel::Linear(train_logistic_regression(
                train,
                &cfg,
                child_seed(seed, 0),
            )?))
        }
        ClassifierConfig::OneClassSvm {
            nu,
            gamma,
            tolerance,
        } => Ok(TrainedModel::OneClass(train_one_class_svm(
            train, *nu, *gamma, *tolerance,
        )?)),
        ClassifierConfig::LlrFusion { threshold } => {
            Ok(TrainedModel::Fusion(fit_gamma_product(train, *threshold)?))
        }
    }
}
