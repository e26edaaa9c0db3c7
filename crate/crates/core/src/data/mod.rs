//! Labelled samples, datasets and the generative data model used to build
//! attacked training and testing sets.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod density;
mod pools;
mod resample;
mod spec;

pub use density::{gamma_log_density, AnalyticDensity};
pub use pools::ScenarioPools;
pub use resample::{resample, FoldSet, ResampleMethod};
pub use spec::{
    sample_dataset, validate_spec, AttackGenerator, ComponentDistribution, DistributionSpec,
    GenerationMode, SpecViolation,
};

/// Class variable. `Malicious` is the positive class throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Legitimate,
    Malicious,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Legitimate, Label::Malicious];

    pub fn short(self) -> &'static str {
        match self {
            Label::Legitimate => "L",
            Label::Malicious => "M",
        }
    }

    pub fn from_short(s: &str) -> Option<Label> {
        match s {
            "L" => Some(Label::Legitimate),
            "M" => Some(Label::Malicious),
            _ => None,
        }
    }

    /// +1 for malicious, -1 for legitimate.
    pub fn sign(self) -> f64 {
        match self {
            Label::Legitimate => -1.0,
            Label::Malicious => 1.0,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

/// Whether a sample was produced by the simulated adversary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AttackFlag {
    Clean,
    Attacked,
}

impl AttackFlag {
    pub const ALL: [AttackFlag; 2] = [AttackFlag::Clean, AttackFlag::Attacked];
}

impl fmt::Display for AttackFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttackFlag::Clean => f.write_str("Clean"),
            AttackFlag::Attacked => f.write_str("Attacked"),
        }
    }
}

/// Training or testing side of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Training,
    Testing,
}

/// A value per class.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerClass<T> {
    pub legitimate: T,
    pub malicious: T,
}

impl<T> PerClass<T> {
    pub fn new(legitimate: T, malicious: T) -> Self {
        Self {
            legitimate,
            malicious,
        }
    }
}

impl<T> Index<Label> for PerClass<T> {
    type Output = T;

    fn index(&self, label: Label) -> &T {
        match label {
            Label::Legitimate => &self.legitimate,
            Label::Malicious => &self.malicious,
        }
    }
}

impl<T> IndexMut<Label> for PerClass<T> {
    fn index_mut(&mut self, label: Label) -> &mut T {
        match label {
            Label::Legitimate => &mut self.legitimate,
            Label::Malicious => &mut self.malicious,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: Label,
    pub flag: AttackFlag,
}

impl Sample {
    pub fn new(features: Vec<f64>, label: Label) -> Self {
        Self {
            features,
            label,
            flag: AttackFlag::Clean,
        }
    }

    pub fn attacked(features: Vec<f64>, label: Label) -> Self {
        Self {
            features,
            label,
            flag: AttackFlag::Attacked,
        }
    }
}

/// An ordered collection of samples sharing one feature dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    dimension: usize,
    samples: Vec<Sample>,
}

impl Dataset {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            samples: Vec::new(),
        }
    }

    pub fn from_samples(dimension: usize, samples: Vec<Sample>) -> Result<Self> {
        if let Some(bad) = samples.iter().find(|s| s.features.len() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: bad.features.len(),
            });
        }
        Ok(Self { dimension, samples })
    }

    pub fn push(&mut self, sample: Sample) -> Result<()> {
        if sample.features.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: sample.features.len(),
            });
        }
        self.samples.push(sample);
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Sample> {
        self.samples.iter()
    }

    pub fn into_samples(self) -> Vec<Sample> {
        self.samples
    }

    /// Samples with the given label, in order, re-flagged as `Clean`.
    pub fn label_slice(&self, label: Label) -> Dataset {
        Dataset {
            dimension: self.dimension,
            samples: self
                .samples
                .iter()
                .filter(|s| s.label == label)
                .map(|s| Sample::new(s.features.clone(), label))
                .collect(),
        }
    }

    pub fn count(&self, label: Label) -> usize {
        self.samples.iter().filter(|s| s.label == label).count()
    }

    pub fn has_both_classes(&self) -> bool {
        self.count(Label::Legitimate) > 0 && self.count(Label::Malicious) > 0
    }

    /// Empirical p(Y = M); zero for an empty set.
    pub fn malicious_fraction(&self) -> f64 {
        if self.samples.is_empty() {
            0.0
        } else {
            self.count(Label::Malicious) as f64 / self.samples.len() as f64
        }
    }

    /// New dataset holding the samples at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            dimension: self.dimension,
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
        }
    }

    pub fn is_binary(&self) -> bool {
        self.samples
            .iter()
            .all(|s| s.features.iter().all(|&v| v == 0.0 || v == 1.0))
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a Sample;
    type IntoIter = std::slice::Iter<'a, Sample>;

    fn into_iter(self) -> Self::IntoIter {
        self.samples.iter()
    }
}
