//! Adversary model and attack-sample generators.
//!
//! An [`AttackScenario`] records what the adversary wants, knows and can do,
//! and the strategy that follows. [`AttackScenario::phase_spec`] turns it
//! into the training or testing data model for one attack strength.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::data::{
    AttackFlag, ComponentDistribution, Dataset, DistributionSpec, Label, PerClass, Phase,
    ScenarioPools,
};

mod generators;
mod pools;

pub use pools::{build_scenario_pools, enforce_capability};
pub use generators::{
    build_spoof_pool, gwi_bwo_attack, poison_training_spec, spoof_substitution, AttackBudget,
    GreedyEvasion, PoisonSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Influence {
    Causative,
    Exploratory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecurityViolation {
    Integrity,
    Availability,
    Privacy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecificityKind {
    Targeted,
    Indiscriminate,
}

/// Either a named category or a degree in [0, 1] (1 = fully targeted).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Specificity {
    Named(SpecificityKind),
    Degree(f64),
}

/// Knowledge flags: training data, feature set, algorithm, parameters, feedback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Knowledge {
    pub training_data: bool,
    pub feature_set: bool,
    pub algorithm: bool,
    pub parameters: bool,
    pub feedback: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiometricTrait {
    Fingerprint,
    Face,
}

impl BiometricTrait {
    /// Coordinate of the trait's score in a (fingerprint, face) pair.
    pub fn index(self) -> usize {
        match self {
            BiometricTrait::Fingerprint => 0,
            BiometricTrait::Face => 1,
        }
    }
}

/// Which feature values the adversary may alter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureConstraint {
    /// Any feature, with no further limit.
    Unconstrained,
    /// At most n_max features per sample (n_max is the attack strength).
    HammingBudget,
    /// Exactly one biometric trait.
    SingleTrait { target: BiometricTrait },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capability {
    pub affects_training: bool,
    pub affects_testing: bool,
    pub prior_change_allowed: bool,
    /// Largest fraction of each class the adversary controls.
    pub controllable: PerClass<f64>,
    pub features: FeatureConstraint,
}

/// Attack-sample generator used to fill the attacked pools.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    None,
    /// Greedy good-word insertion / bad-word obfuscation against a linear model.
    GoodWordBadWord,
    /// Replace one impostor score with a random genuine score.
    Spoof { target: BiometricTrait },
    /// Inject copies of the malicious testing samples into training data.
    PoisonFromTestMalicious,
}

/// p(A = attacked | Y) per phase.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseFractions {
    pub training: PerClass<f64>,
    pub testing: PerClass<f64>,
}

impl PhaseFractions {
    pub fn get(&self, phase: Phase) -> &PerClass<f64> {
        match phase {
            Phase::Training => &self.training,
            Phase::Testing => &self.testing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    /// Set p(Y = M) of the attacked phase to the attack strength.
    #[serde(default)]
    pub prior_override: bool,
    pub attacked_fraction: PhaseFractions,
    pub generator: GeneratorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrengthParam {
    /// Maximum number of modified features per sample.
    NMax,
    /// Maximum fraction of attack samples in the training set.
    PMax,
    /// Multiplier on the attacked fraction (0 = no attack, 1 = full strategy).
    AttackProb,
}

impl StrengthParam {
    pub fn name(self) -> &'static str {
        match self {
            StrengthParam::NMax => "n_max",
            StrengthParam::PMax => "p_max",
            StrengthParam::AttackProb => "attack_prob",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrengthRange {
    pub param: StrengthParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackScenario {
    pub influence: Influence,
    pub violation: SecurityViolation,
    pub specificity: Specificity,
    pub knowledge: Knowledge,
    pub capability: Capability,
    pub strategy: Strategy,
    pub strength: StrengthRange,
}

impl AttackScenario {
    /// Whether the strategy manipulates data of `phase` at all.
    pub fn affects(&self, phase: Phase) -> bool {
        let f = self.strategy.attacked_fraction.get(phase);
        f.legitimate > 0.0 || f.malicious > 0.0
    }

    /// Attack probability for `label` in `phase` at the given strength.
    pub fn attack_prob(&self, phase: Phase, label: Label, strength: f64) -> f64 {
        if strength == 0.0 {
            return 0.0;
        }
        let base = self.strategy.attacked_fraction.get(phase)[label];
        match self.strength.param {
            StrengthParam::AttackProb => (base * strength).clamp(0.0, 1.0),
            _ => base,
        }
    }

    /// p(Y = M) for `phase`: the strength when the strategy overrides the
    /// prior of an attacked phase, the empirical prior of `clean` otherwise.
    pub fn phase_prior(&self, phase: Phase, strength: f64, clean: &Dataset) -> f64 {
        if self.strategy.prior_override && self.affects(phase) {
            strength
        } else {
            clean.malicious_fraction()
        }
    }

    /// Data model of one phase at one attack strength.
    pub fn phase_spec(
        &self,
        phase: Phase,
        strength: f64,
        clean: &Dataset,
        pools: &ScenarioPools,
    ) -> DistributionSpec {
        let prior = self.phase_prior(phase, strength, clean);
        let attack_prob = PerClass::new(
            self.attack_prob(phase, Label::Legitimate, strength),
            self.attack_prob(phase, Label::Malicious, strength),
        );
        let mut spec = DistributionSpec::new(prior, attack_prob);
        for label in Label::ALL {
            for flag in AttackFlag::ALL {
                if spec.cell_prob(label, flag) > 0.0 {
                    if let Some(pool) = pools.get(phase, label, flag) {
                        spec.components.insert(
                            (label, flag),
                            ComponentDistribution::EmpiricalPool(pool.clone()),
                        );
                    }
                }
            }
        }
        spec
    }
}

/// One failed consistency rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioIssue {
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for ScenarioIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.message)
    }
}

/// Checks taxonomy coherence and that the strategy stays within capability
/// and knowledge. Empty means consistent.
pub fn check_scenario_consistency(s: &AttackScenario) -> Vec<ScenarioIssue> {
    let mut issues = Vec::new();
    let mut flag = |rule: &'static str, message: String| issues.push(ScenarioIssue { rule, message });
    let cap = &s.capability;
    let strat = &s.strategy;

    if s.influence == Influence::Exploratory && cap.affects_training {
        flag(
            "taxonomy",
            "exploratory attacks cannot affect training data".into(),
        );
    }
    if s.influence == Influence::Exploratory && s.affects(Phase::Training) {
        flag(
            "taxonomy",
            "exploratory scenario attacks training samples".into(),
        );
    }
    if s.influence == Influence::Causative && !cap.affects_training {
        flag(
            "taxonomy",
            "causative attacks must be able to affect training data".into(),
        );
    }
    if let Specificity::Degree(d) = s.specificity {
        if !(0.0..=1.0).contains(&d) {
            flag("taxonomy", format!("specificity degree {d} outside [0, 1]"));
        }
    }
    if strat.generator != GeneratorKind::None && s.violation != SecurityViolation::Integrity {
        flag(
            "taxonomy",
            "only integrity violations have attack generators".into(),
        );
    }

    for (phase, allowed, name) in [
        (Phase::Training, cap.affects_training, "training"),
        (Phase::Testing, cap.affects_testing, "testing"),
    ] {
        let fractions = strat.attacked_fraction.get(phase);
        for label in Label::ALL {
            let f = fractions[label];
            if !(0.0..=1.0).contains(&f) {
                flag(
                    "strategy",
                    format!("{name} attacked fraction for {label} outside [0, 1]"),
                );
            }
            if f > 0.0 && !allowed {
                flag(
                    "capability",
                    format!("strategy attacks {name} data the adversary cannot reach"),
                );
            }
            if f > cap.controllable[label] {
                flag(
                    "capability",
                    format!(
                        "{name} attacked fraction {f} for {label} exceeds controllable fraction {}",
                        cap.controllable[label]
                    ),
                );
            }
        }
    }
    if strat.prior_override && !cap.prior_change_allowed {
        flag(
            "capability",
            "strategy changes class priors but capability forbids it".into(),
        );
    }

    let gen_phase = match strat.generator {
        GeneratorKind::None => None,
        GeneratorKind::GoodWordBadWord | GeneratorKind::Spoof { .. } => Some(Phase::Testing),
        GeneratorKind::PoisonFromTestMalicious => Some(Phase::Training),
    };
    if let Some(phase) = gen_phase {
        if strat.attacked_fraction.get(phase).malicious <= 0.0 {
            flag(
                "strategy",
                format!("generator acts on {phase:?} malicious samples but none are attacked"),
            );
        }
        let other = match phase {
            Phase::Training => Phase::Testing,
            Phase::Testing => Phase::Training,
        };
        if s.affects(other) {
            flag(
                "strategy",
                format!("generator only produces {phase:?} samples but {other:?} samples are attacked"),
            );
        }
    } else if s.affects(Phase::Training) || s.affects(Phase::Testing) {
        flag(
            "strategy",
            "samples are attacked but no generator is configured".into(),
        );
    }

    match strat.generator {
        GeneratorKind::GoodWordBadWord => {
            if !(s.knowledge.parameters && s.knowledge.feature_set && s.knowledge.algorithm) {
                flag(
                    "knowledge",
                    "greedy evasion needs the feature set, the decision function and its parameters"
                        .into(),
                );
            }
            if cap.features != FeatureConstraint::HammingBudget {
                flag(
                    "capability",
                    "greedy evasion requires a Hamming-budget feature constraint".into(),
                );
            }
            if s.strength.param != StrengthParam::NMax {
                flag("strength", "greedy evasion is swept over n_max".into());
            }
        }
        GeneratorKind::Spoof { target } => {
            if !s.knowledge.feature_set {
                flag("knowledge", "spoofing needs knowledge of the traits used".into());
            }
            if cap.features != (FeatureConstraint::SingleTrait { target }) {
                flag(
                    "capability",
                    "spoofed trait must match the single-trait feature constraint".into(),
                );
            }
            if s.strength.param != StrengthParam::AttackProb {
                flag("strength", "spoofing is swept over attack_prob".into());
            }
        }
        GeneratorKind::PoisonFromTestMalicious => {
            if !s.knowledge.feature_set {
                flag("knowledge", "poisoning needs the feature set".into());
            }
            if s.strength.param != StrengthParam::PMax {
                flag("strength", "poisoning is swept over p_max".into());
            }
            if !strat.prior_override {
                flag(
                    "strategy",
                    "poisoning injects samples by overriding the training prior".into(),
                );
            }
        }
        GeneratorKind::None => {}
    }

    for &v in &s.strength.values {
        let ok = match s.strength.param {
            StrengthParam::NMax => v >= 0.0 && v.fract() == 0.0,
            StrengthParam::PMax => (0.0..=0.5).contains(&v),
            StrengthParam::AttackProb => (0.0..=1.0).contains(&v),
        };
        if !ok {
            flag(
                "strength",
                format!("{} value {v} out of range", s.strength.param.name()),
            );
        }
    }
    if strat.prior_override {
        if let Some(&max) = s
            .strength
            .values
            .iter()
            .max_by(|a, b| a.total_cmp(b))
        {
            if max > cap.controllable.malicious {
                flag(
                    "capability",
                    format!("prior override up to {max} exceeds controllable fraction"),
                );
            }
        }
    }
    issues
}

/// Ready-made scenarios for the three case studies (spam evasion, biometric
/// spoofing, anomaly-detector poisoning).
pub mod canned {
    use super::*;

    pub fn spam_evasion(n_max: Vec<f64>) -> AttackScenario {
        AttackScenario {
            influence: Influence::Exploratory,
            violation: SecurityViolation::Integrity,
            specificity: Specificity::Named(SpecificityKind::Indiscriminate),
            knowledge: Knowledge {
                training_data: false,
                feature_set: true,
                algorithm: true,
                parameters: true,
                feedback: false,
            },
            capability: Capability {
                affects_training: false,
                affects_testing: true,
                prior_change_allowed: false,
                controllable: PerClass::new(0.0, 1.0),
                features: FeatureConstraint::HammingBudget,
            },
            strategy: Strategy {
                prior_override: false,
                attacked_fraction: PhaseFractions {
                    training: PerClass::new(0.0, 0.0),
                    testing: PerClass::new(0.0, 1.0),
                },
                generator: GeneratorKind::GoodWordBadWord,
            },
            strength: StrengthRange {
                param: StrengthParam::NMax,
                values: n_max,
            },
        }
    }

    pub fn biometric_spoof(target: BiometricTrait) -> AttackScenario {
        AttackScenario {
            influence: Influence::Exploratory,
            violation: SecurityViolation::Integrity,
            specificity: Specificity::Named(SpecificityKind::Targeted),
            knowledge: Knowledge {
                training_data: true,
                feature_set: true,
                algorithm: false,
                parameters: false,
                feedback: false,
            },
            capability: Capability {
                affects_training: false,
                affects_testing: true,
                prior_change_allowed: false,
                controllable: PerClass::new(0.0, 1.0),
                features: FeatureConstraint::SingleTrait { target },
            },
            strategy: Strategy {
                prior_override: false,
                attacked_fraction: PhaseFractions {
                    training: PerClass::new(0.0, 0.0),
                    testing: PerClass::new(0.0, 1.0),
                },
                generator: GeneratorKind::Spoof { target },
            },
            strength: StrengthRange {
                param: StrengthParam::AttackProb,
                values: vec![0.0, 1.0],
            },
        }
    }

    pub fn ids_poisoning(p_max: Vec<f64>) -> AttackScenario {
        AttackScenario {
            influence: Influence::Causative,
            violation: SecurityViolation::Integrity,
            specificity: Specificity::Named(SpecificityKind::Indiscriminate),
            knowledge: Knowledge {
                training_data: false,
                feature_set: true,
                algorithm: true,
                parameters: false,
                feedback: false,
            },
            capability: Capability {
                affects_training: true,
                affects_testing: false,
                prior_change_allowed: true,
                controllable: PerClass::new(0.0, 1.0),
                features: FeatureConstraint::Unconstrained,
            },
            strategy: Strategy {
                prior_override: true,
                attacked_fraction: PhaseFractions {
                    training: PerClass::new(0.0, 1.0),
                    testing: PerClass::new(0.0, 0.0),
                },
                generator: GeneratorKind::PoisonFromTestMalicious,
            },
            strength: StrengthRange {
                param: StrengthParam::PMax,
                values: p_max,
            },
        }
    }
}
