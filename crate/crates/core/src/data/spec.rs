use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::{AnalyticDensity, AttackFlag, Dataset, Label, PerClass, Sample};
use crate::error::{Error, Result};
use crate::rng::{bernoulli, child_seed, rng_from_seed, StreamRng};

/// Produces attack samples on demand.
///
/// `partial` is the dataset generated so far. Generators that build each
/// attack sample from the current training set (incremental poisoning) read
/// it; the rest ignore it.
pub trait AttackGenerator: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn dimension(&self) -> usize;
    fn generate(&self, rng: &mut StreamRng, partial: &Dataset) -> Result<Vec<f64>>;
}

/// p(X | Y = y, A = a) for one (y, a) cell.
#[derive(Debug, Clone)]
pub enum ComponentDistribution {
    Analytic(AnalyticDensity),
    /// Empirical distribution of a finite pool, sampled with replacement.
    EmpiricalPool(Arc<Dataset>),
    AttackGenerator(Arc<dyn AttackGenerator>),
}

impl ComponentDistribution {
    pub fn pool(data: Dataset) -> Self {
        ComponentDistribution::EmpiricalPool(Arc::new(data))
    }

    pub fn dimension(&self) -> usize {
        match self {
            ComponentDistribution::Analytic(d) => d.dimension(),
            ComponentDistribution::EmpiricalPool(p) => p.dimension(),
            ComponentDistribution::AttackGenerator(g) => g.dimension(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GenerationMode {
    /// Each sample drawn independently.
    #[default]
    Iid,
    /// All (y, a) cells first, then clean features, then attack samples one
    /// at a time with the partial dataset visible to the generator.
    IncrementalAttackLast,
}

/// The factorised model p(Y) p(A | Y) p(X | Y, A) for one phase.
#[derive(Debug, Clone)]
pub struct DistributionSpec {
    pub prior_malicious: f64,
    pub attack_prob: PerClass<f64>,
    pub components: BTreeMap<(Label, AttackFlag), ComponentDistribution>,
    pub mode: GenerationMode,
}

impl DistributionSpec {
    pub fn new(prior_malicious: f64, attack_prob: PerClass<f64>) -> Self {
        Self {
            prior_malicious,
            attack_prob,
            components: BTreeMap::new(),
            mode: GenerationMode::Iid,
        }
    }

    pub fn with_component(
        mut self,
        label: Label,
        flag: AttackFlag,
        component: ComponentDistribution,
    ) -> Self {
        self.components.insert((label, flag), component);
        self
    }

    pub fn with_mode(mut self, mode: GenerationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn class_prob(&self, label: Label) -> f64 {
        match label {
            Label::Legitimate => 1.0 - self.prior_malicious,
            Label::Malicious => self.prior_malicious,
        }
    }

    /// Joint p(y) p(a | y).
    pub fn cell_prob(&self, label: Label, flag: AttackFlag) -> f64 {
        let attacked = self.attack_prob[label];
        let pa = match flag {
            AttackFlag::Attacked => attacked,
            AttackFlag::Clean => 1.0 - attacked,
        };
        self.class_prob(label) * pa
    }

    pub fn component(&self, label: Label, flag: AttackFlag) -> Option<&ComponentDistribution> {
        self.components.get(&(label, flag))
    }

    /// Dimension shared by the components, if they agree.
    pub fn dimension(&self) -> Option<usize> {
        let mut dims = self.components.values().map(|c| c.dimension());
        let first = dims.next()?;
        dims.all(|d| d == first).then_some(first)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecViolation {
    PriorOutOfRange(f64),
    AttackProbOutOfRange { label: Label, value: f64 },
    MissingComponent { label: Label, flag: AttackFlag },
    EmptyPool { label: Label, flag: AttackFlag },
    InvalidDensity { label: Label, flag: AttackFlag, reason: String },
    DimensionMismatch,
}

impl fmt::Display for SpecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecViolation::PriorOutOfRange(p) => write!(f, "prior out of range: {p}"),
            SpecViolation::AttackProbOutOfRange { label, value } => {
                write!(f, "attack probability for {label} out of range: {value}")
            }
            SpecViolation::MissingComponent { label, flag } => {
                write!(f, "missing component ({label}, {flag})")
            }
            SpecViolation::EmptyPool { label, flag } => {
                write!(f, "empty pool ({label}, {flag}) with positive probability")
            }
            SpecViolation::InvalidDensity {
                label,
                flag,
                reason,
            } => write!(f, "invalid density ({label}, {flag}): {reason}"),
            SpecViolation::DimensionMismatch => f.write_str("components disagree on dimension"),
        }
    }
}

/// Lists every reason `spec` cannot be sampled; empty means usable.
pub fn validate_spec(spec: &DistributionSpec) -> Vec<SpecViolation> {
    let mut out = Vec::new();
    let prior_ok = (0.0..=1.0).contains(&spec.prior_malicious);
    if !prior_ok {
        out.push(SpecViolation::PriorOutOfRange(spec.prior_malicious));
    }
    let mut probs_ok = prior_ok;
    for label in Label::ALL {
        let value = spec.attack_prob[label];
        if !(0.0..=1.0).contains(&value) {
            out.push(SpecViolation::AttackProbOutOfRange { label, value });
            probs_ok = false;
        }
    }
    if probs_ok {
        for label in Label::ALL {
            for flag in AttackFlag::ALL {
                if spec.cell_prob(label, flag) <= 0.0 {
                    continue;
                }
                match spec.component(label, flag) {
                    None => out.push(SpecViolation::MissingComponent { label, flag }),
                    Some(ComponentDistribution::EmpiricalPool(pool)) if pool.is_empty() => {
                        out.push(SpecViolation::EmptyPool { label, flag })
                    }
                    Some(ComponentDistribution::Analytic(d)) => {
                        if let Err(reason) = d.check() {
                            out.push(SpecViolation::InvalidDensity {
                                label,
                                flag,
                                reason,
                            });
                        }
                    }
                    Some(_) => {}
                }
            }
        }
    }
    if !spec.components.is_empty() && spec.dimension().is_none() {
        out.push(SpecViolation::DimensionMismatch);
    }
    out
}

fn draw_cell(spec: &DistributionSpec, rng: &mut StreamRng) -> (Label, AttackFlag) {
    let label = if bernoulli(rng, spec.prior_malicious) {
        Label::Malicious
    } else {
        Label::Legitimate
    };
    let flag = if bernoulli(rng, spec.attack_prob[label]) {
        AttackFlag::Attacked
    } else {
        AttackFlag::Clean
    };
    (label, flag)
}

fn draw_features(
    spec: &DistributionSpec,
    label: Label,
    flag: AttackFlag,
    rng: &mut StreamRng,
    partial: &Dataset,
) -> Result<Vec<f64>> {
    match spec.component(label, flag) {
        None => Err(Error::EmptyPool { label, flag }),
        Some(ComponentDistribution::Analytic(d)) => d.sample(rng),
        Some(ComponentDistribution::EmpiricalPool(pool)) => {
            if pool.is_empty() {
                return Err(Error::EmptyPool { label, flag });
            }
            let i = rng.random_range(0..pool.len() as u64) as usize;
            Ok(pool.samples()[i].features.clone())
        }
        Some(ComponentDistribution::AttackGenerator(g)) => g.generate(rng, partial),
    }
}

/// Draws `n` samples from `spec`.
///
/// Labels and flags come from one stream and feature vectors from another,
/// both children of `seed`, so the two generation modes see the same cells.
pub fn sample_dataset(spec: &DistributionSpec, n: usize, seed: u64) -> Result<Dataset> {
    if let Some(v) = validate_spec(spec).into_iter().next() {
        return Err(match v {
            SpecViolation::MissingComponent { label, flag }
            | SpecViolation::EmptyPool { label, flag } => Error::EmptyPool { label, flag },
            other => Error::InvalidSpec(other.to_string()),
        });
    }
    let dimension = spec
        .dimension()
        .ok_or_else(|| Error::InvalidSpec("spec has no components".into()))?;
    let mut cell_rng = rng_from_seed(child_seed(seed, 0));
    let mut feature_rng = rng_from_seed(child_seed(seed, 1));
    let cells: Vec<(Label, AttackFlag)> =
        (0..n).map(|_| draw_cell(spec, &mut cell_rng)).collect();

    match spec.mode {
        GenerationMode::Iid => {
            let mut out = Dataset::new(dimension);
            for (label, flag) in cells {
                let x = draw_features(spec, label, flag, &mut feature_rng, &out)?;
                out.push(Sample {
                    features: x,
                    label,
                    flag,
                })?;
            }
            Ok(out)
        }
        GenerationMode::IncrementalAttackLast => {
            let mut slots: Vec<Option<Sample>> = vec![None; n];
            let mut partial = Dataset::new(dimension);
            for (i, &(label, flag)) in cells.iter().enumerate() {
                if flag == AttackFlag::Clean {
                    let x = draw_features(spec, label, flag, &mut feature_rng, &partial)?;
                    let s = Sample::new(x, label);
                    partial.push(s.clone())?;
                    slots[i] = Some(s);
                }
            }
            for (i, &(label, flag)) in cells.iter().enumerate() {
                if flag == AttackFlag::Attacked {
                    let x = draw_features(spec, label, flag, &mut feature_rng, &partial)?;
                    let s = Sample::attacked(x, label);
                    partial.push(s.clone())?;
                    slots[i] = Some(s);
                }
            }
            Dataset::from_samples(dimension, slots.into_iter().flatten().collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labelled(values: &[(f64, Label)]) -> Dataset {
        Dataset::from_samples(
            1,
            values
                .iter()
                .map(|&(v, l)| Sample::new(vec![v], l))
                .collect(),
        )
        .unwrap()
    }

    fn four_cell_spec() -> DistributionSpec {
        let pool = |v: f64| {
            ComponentDistribution::pool(labelled(&[(v, Label::Legitimate)]))
        };
        DistributionSpec::new(0.5, PerClass::new(0.2, 0.7))
            .with_component(Label::Legitimate, AttackFlag::Clean, pool(0.0))
            .with_component(Label::Legitimate, AttackFlag::Attacked, pool(1.0))
            .with_component(Label::Malicious, AttackFlag::Clean, pool(2.0))
            .with_component(Label::Malicious, AttackFlag::Attacked, pool(3.0))
    }

    #[test]
    fn fully_specified_spec_is_valid() {
        assert!(validate_spec(&four_cell_spec()).is_empty());
    }

    #[test]
    fn missing_attacked_component_is_named() {
        let spec = DistributionSpec::new(0.5, PerClass::new(0.0, 1.0)).with_component(
            Label::Legitimate,
            AttackFlag::Clean,
            ComponentDistribution::pool(labelled(&[(0.0, Label::Legitimate)])),
        );
        let report = validate_spec(&spec);
        assert_eq!(
            report,
            vec![SpecViolation::MissingComponent {
                label: Label::Malicious,
                flag: AttackFlag::Attacked
            }]
        );
    }

    #[test]
    fn prior_out_of_range_is_reported() {
        let mut spec = four_cell_spec();
        spec.prior_malicious = 1.2;
        let report = validate_spec(&spec);
        assert_eq!(report.len(), 1);
        assert!(report[0].to_string().starts_with("prior out of range"));
    }

    #[test]
    fn point_mass_spec() {
        let v = vec![0.25, 0.5];
        let pool = Dataset::from_samples(2, vec![Sample::new(v.clone(), Label::Malicious)]).unwrap();
        let spec = DistributionSpec::new(1.0, PerClass::new(0.0, 1.0)).with_component(
            Label::Malicious,
            AttackFlag::Attacked,
            ComponentDistribution::pool(pool),
        );
        let d = sample_dataset(&spec, 5, 11).unwrap();
        assert_eq!(d.len(), 5);
        for s in &d {
            assert_eq!(s.label, Label::Malicious);
            assert_eq!(s.flag, AttackFlag::Attacked);
            assert_eq!(s.features, v);
        }
    }

    #[test]
    fn empty_pool_with_mass_errors() {
        let spec = DistributionSpec::new(1.0, PerClass::new(0.0, 0.0)).with_component(
            Label::Malicious,
            AttackFlag::Clean,
            ComponentDistribution::pool(Dataset::new(1)),
        );
        assert!(matches!(
            sample_dataset(&spec, 3, 0),
            Err(Error::EmptyPool {
                label: Label::Malicious,
                flag: AttackFlag::Clean
            })
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = four_cell_spec();
        assert_eq!(
            sample_dataset(&spec, 500, 42).unwrap(),
            sample_dataset(&spec, 500, 42).unwrap()
        );
        assert_ne!(
            sample_dataset(&spec, 500, 42).unwrap(),
            sample_dataset(&spec, 500, 43).unwrap()
        );
    }

    #[test]
    fn clean_features_come_from_their_pool() {
        let d = sample_dataset(&four_cell_spec(), 2000, 5).unwrap();
        for s in &d {
            let expected = match (s.label, s.flag) {
                (Label::Legitimate, AttackFlag::Clean) => 0.0,
                (Label::Legitimate, AttackFlag::Attacked) => 1.0,
                (Label::Malicious, AttackFlag::Clean) => 2.0,
                (Label::Malicious, AttackFlag::Attacked) => 3.0,
            };
            assert_eq!(s.features[0], expected);
        }
    }

    #[derive(Debug)]
    struct CountingGenerator;

    impl AttackGenerator for CountingGenerator {
        fn name(&self) -> &str {
            "counting"
        }
        fn dimension(&self) -> usize {
            1
        }
        fn generate(&self, _rng: &mut StreamRng, partial: &Dataset) -> Result<Vec<f64>> {
            Ok(vec![partial.len() as f64])
        }
    }

    #[test]
    fn incremental_mode_shows_partial_set_to_generator() {
        let spec = DistributionSpec::new(0.5, PerClass::new(0.0, 1.0))
            .with_component(
                Label::Legitimate,
                AttackFlag::Clean,
                ComponentDistribution::pool(labelled(&[(-1.0, Label::Legitimate)])),
            )
            .with_component(
                Label::Malicious,
                AttackFlag::Attacked,
                ComponentDistribution::AttackGenerator(Arc::new(CountingGenerator)),
            )
            .with_mode(GenerationMode::IncrementalAttackLast);
        let d = sample_dataset(&spec, 50, 9).unwrap();
        let n_clean = d.count(Label::Legitimate);
        let mut seen: Vec<f64> = d
            .iter()
            .filter(|s| s.flag == AttackFlag::Attacked)
            .map(|s| s.features[0])
            .collect();
        seen.sort_by(f64::total_cmp);
        let expected: Vec<f64> = (n_clean..50).map(|v| v as f64).collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn modes_agree_on_cells() {
        let iid = four_cell_spec();
        let inc = four_cell_spec().with_mode(GenerationMode::IncrementalAttackLast);
        let a = sample_dataset(&iid, 300, 77).unwrap();
        let b = sample_dataset(&inc, 300, 77).unwrap();
        let cells = |d: &Dataset| d.iter().map(|s| (s.label, s.flag)).collect::<Vec<_>>();
        assert_eq!(cells(&a), cells(&b));
    }
}
