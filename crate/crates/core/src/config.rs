//! Scenario configuration files.
//!
//! A config declares the data source, the classifiers to compare, the
//! attack scenario with its strength range, and how to evaluate. Canned
//! configs for the three case studies ship under `scenarios/`.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::attacks::{check_scenario_consistency, AttackScenario, GeneratorKind};
use crate::data::ResampleMethod;
use crate::error::{Error, Result};
use crate::evaluation::{ClassifierConfig, Construction, Metric};
use crate::synthetic::{OneClassTask, ScoreModel};

pub const CONFIG_VERSION: u32 = 1;

const CANNED: &[(&str, &str)] = &[
    ("spam_gwi_bwo", include_str!("../scenarios/spam_gwi_bwo.toml")),
    ("biometric_spoof", include_str!("../scenarios/biometric_spoof.toml")),
    ("biometric_spoof_face", include_str!("../scenarios/biometric_spoof_face.toml")),
    ("ids_poison", include_str!("../scenarios/ids_poison.toml")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    /// Generated binary bag-of-words emails.
    SyntheticSpam,
    /// Generated 2-D anomaly-detection task with its own train/test split.
    SyntheticIds,
    /// Generated Gamma-distributed (fingerprint, face) scores.
    SyntheticBiometric,
    /// Index file of `ham|spam <path>` lines.
    Emails,
    /// `<hex>,<L|M>` payload lines.
    Payloads,
    /// `user_id,claimed_id,fing_score,face_score,label` rows.
    Scores,
    /// Dense or sparse feature file.
    Tabular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub source: DataSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Separate testing file; when set, `path` is the training file and no
    /// resampling takes place.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vocab_size: Option<usize>,
    /// Number of generated samples (synthetic spam and biometric sources).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Number of generated features (synthetic spam).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<usize>,
    /// Fraction of genuine samples in the synthetic biometric set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genuine_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub one_class_task: Option<OneClassTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score_model: Option<ScoreModel>,
    #[serde(default = "default_resampling")]
    pub resampling: ResampleMethod,
}

fn default_resampling() -> ResampleMethod {
    ResampleMethod::CrossValidation { k: 5 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedClassifier {
    pub name: String,
    #[serde(flatten)]
    pub config: ClassifierConfig,
}

fn default_metric() -> Metric {
    Metric::Auc10
}

fn default_repetitions() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationConfig {
    #[serde(default = "default_metric")]
    pub metric: Metric,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub testing_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    /// Store a pooled ROC curve per strength in the report.
    #[serde(default)]
    pub keep_roc: bool,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self {
            metric: default_metric(),
            seed: 0,
            repetitions: 1,
            construction: Construction::default(),
            training_size: None,
            testing_size: None,
            jobs: None,
            keep_roc: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            formats: default_formats(),
        }
    }
}

impl OutputConfig {
    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub data: DataConfig,
    pub classifiers: Vec<NamedClassifier>,
    pub attack: AttackScenario,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Directory relative data paths are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                cfg.version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn canned_names() -> impl Iterator<Item = &'static str> {
        CANNED.iter().map(|(n, _)| *n)
    }

    /// The shipped config text for a canned scenario.
    pub fn canned_text(name: &str) -> Result<&'static str> {
        CANNED
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| {
                let known: Vec<&str> = Self::canned_names().collect();
                Error::Config(format!(
                    "unknown scenario `{name}` (known: {})",
                    known.join(", ")
                ))
            })
    }

    pub fn canned(name: &str) -> Result<Self> {
        Self::from_toml_str(Self::canned_text(name)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn resolve_path(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn strengths(&self) -> &[f64] {
        &self.attack.strength.values
    }

    /// Static checks that need no data. Errors are configuration errors;
    /// the returned strings are warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut errors = Vec::new();
        let mut warnings = Vec::new();
        if self.classifiers.is_empty() {
            errors.push("at least one classifier is required".to_owned());
        }
        let mut names = BTreeSet::new();
        for c in &self.classifiers {
            if c.name.is_empty() || c.name.contains(['/', '\\']) {
                errors.push(format!("invalid classifier name `{}`", c.name));
            }
            if !names.insert(c.name.as_str()) {
                errors.push(format!("duplicate classifier name `{}`", c.name));
            }
        }
        let strengths = self.strengths();
        if strengths.is_empty() {
            errors.push("attack.strength.values is empty".to_owned());
        } else if !strengths.contains(&0.0) {
            errors.push("attack.strength.values must include 0".to_owned());
        }
        if strengths.iter().any(|s| !s.is_finite() || *s < 0.0) {
            errors.push("strength values must be finite and nonnegative".to_owned());
        }
        for issue in check_scenario_consistency(&self.attack) {
            errors.push(format!("attack: {issue}"));
        }
        match self.attack.strategy.generator {
            GeneratorKind::GoodWordBadWord => {
                for c in &self.classifiers {
                    if !matches!(
                        c.config,
                        ClassifierConfig::LinearSvm { .. } | ClassifierConfig::LogisticRegression { .. }
                    ) {
                        errors.push(format!(
                            "classifier `{}`: greedy evasion needs a linear classifier",
                            c.name
                        ));
                    }
                }
            }
            GeneratorKind::Spoof { .. } => {
                if !matches!(
                    self.data.source,
                    DataSource::Scores | DataSource::SyntheticBiometric | DataSource::Tabular
                ) {
                    errors.push("spoofing needs a score dataset".to_owned());
                }
            }
            _ => {}
        }
        let d = &self.data;
        let needs_path = matches!(
            d.source,
            DataSource::Emails | DataSource::Payloads | DataSource::Scores | DataSource::Tabular
        );
        if needs_path && d.path.is_none() {
            errors.push(format!("data.path is required for source {:?}", d.source));
        }
        if !needs_path && (d.path.is_some() || d.test_path.is_some()) {
            warnings.push("data.path is ignored for synthetic sources".to_owned());
        }
        if d.source == DataSource::Emails && d.vocab_size.is_none() {
            errors.push("data.vocab_size is required for emails".to_owned());
        }
        if d.source != DataSource::Emails && d.vocab_size.is_some() {
            warnings.push("data.vocab_size only applies to emails".to_owned());
        }
        if let Some(f) = d.genuine_fraction {
            if !(f > 0.0 && f < 1.0) {
                errors.push(format!("data.genuine_fraction must lie in (0, 1), got {f}"));
            }
        }
        if self.evaluation.repetitions == 0 {
            errors.push("evaluation.repetitions must be at least 1".to_owned());
        }
        if self.evaluation.jobs == Some(0) {
            errors.push("evaluation.jobs must be at least 1".to_owned());
        }
        if let Metric::FarAtGar { gar } = self.evaluation.metric {
            if !(gar > 0.0 && gar <= 1.0) {
                errors.push(format!("GAR must lie in (0, 1], got {gar}"));
            }
        }
        if self.output.formats.is_empty() {
            errors.push("output.formats is empty".to_owned());
        }
        if errors.is_empty() {
            Ok(warnings)
        } else {
            Err(Error::Config(errors.join("; ")))
        }
    }
}
