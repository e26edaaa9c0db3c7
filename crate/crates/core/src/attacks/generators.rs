use rand::Rng;

use super::BiometricTrait;
use crate::classifiers::LinearModel;
use crate::data::{AttackFlag, ComponentDistribution, Dataset, DistributionSpec, Label, PerClass, Sample};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Maximum number of features the adversary may flip per sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackBudget {
    n_max: usize,
}

impl AttackBudget {
    pub fn new(n_max: usize, dimension: usize) -> Result<Self> {
        if n_max > dimension {
            return Err(Error::InvalidParameter(format!(
                "n_max = {n_max} exceeds the feature dimension {dimension}"
            )));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

/// Largest fraction of poisoned training samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoisonSpec {
    p_max: f64,
}

impl PoisonSpec {
    pub fn new(p_max: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p_max) {
            return Err(Error::CapabilityViolation(format!(
                "p_max = {p_max} outside [0, 0.5]"
            )));
        }
        Ok(Self { p_max })
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }
}

/// Greedy good-word insertion / bad-word obfuscation against one linear
/// model. The scan order (descending |w|, ties by index, zero weights
/// dropped) is computed once and reused for every sample.
#[derive(Debug, Clone)]
pub struct GreedyEvasion {
    weights: Vec<f64>,
    order: Vec<usize>,
}

impl GreedyEvasion {
    pub fn new(model: &LinearModel) -> Self {
        let weights = model.weights.clone();
        let mut order: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] != 0.0).collect();
        order.sort_by(|&a, &b| weights[b].abs().total_cmp(&weights[a].abs()).then(a.cmp(&b)));
        Self { weights, order }
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn attack(&self, x: &[f64], n_max: usize) -> Result<Vec<f64>> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: x.len(),
            });
        }
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, &v)| v != 0.0 && v != 1.0) {
            return Err(Error::NonBinary { index, value });
        }
        let mut out = x.to_vec();
        let mut flips = 0;
        for &i in &self.order {
            if flips >= n_max {
                break;
            }
            let w = self.weights[i];
            if w < 0.0 && out[i] == 0.0 {
                out[i] = 1.0;
                flips += 1;
            } else if w > 0.0 && out[i] == 1.0 {
                out[i] = 0.0;
                flips += 1;
            }
        }
        Ok(out)
    }
}

/// Minimises g over the Hamming ball of radius n_max around binary `x`.
pub fn gwi_bwo_attack(x: &[f64], model: &LinearModel, budget: AttackBudget) -> Result<Vec<f64>> {
    GreedyEvasion::new(model).attack(x, budget.n_max())
}

/// Replaces the impostor's score for `target` with the genuine one.
pub fn spoof_substitution(impostor: [f64; 2], genuine: [f64; 2], target: BiometricTrait) -> [f64; 2] {
    let mut out = impostor;
    let i = target.index();
    out[i] = genuine[i];
    out
}

/// One spoofed sample per impostor, each against a genuine score pair drawn
/// uniformly and independently from `genuine_pool`.
pub fn build_spoof_pool(
    impostor_pool: &Dataset,
    genuine_pool: &Dataset,
    target: BiometricTrait,
    seed: u64,
) -> Result<Dataset> {
    for pool in [impostor_pool, genuine_pool] {
        if pool.dimension() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: pool.dimension(),
            });
        }
    }
    if genuine_pool.is_empty() {
        return Err(Error::EmptyPool {
            label: Label::Legitimate,
            flag: AttackFlag::Clean,
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut out = Dataset::new(2);
    for s in impostor_pool {
        let g = &genuine_pool.samples()[rng.random_range(0..genuine_pool.len() as u64) as usize];
        let spoofed = spoof_substitution(
            [s.features[0], s.features[1]],
            [g.features[0], g.features[1]],
            target,
        );
        out.push(Sample::attacked(spoofed.to_vec(), Label::Malicious))?;
    }
    Ok(out)
}

/// Training-phase model of the poisoning attack: p(Y = M) = p_max and every
/// malicious training sample is an attack sample drawn from the malicious
/// testing pool.
pub fn poison_training_spec(
    legitimate_pool: &Dataset,
    malicious_test_pool: &Dataset,
    poison: PoisonSpec,
) -> Result<DistributionSpec> {
    if poison.p_max() > 0.0 && malicious_test_pool.is_empty() {
        return Err(Error::EmptyPool {
            label: Label::Malicious,
            flag: AttackFlag::Attacked,
        });
    }
    let attacked = Dataset::from_samples(
        malicious_test_pool.dimension(),
        malicious_test_pool
            .iter()
            .map(|s| Sample::attacked(s.features.clone(), Label::Malicious))
            .collect(),
    )?;
    let clean = legitimate_pool.label_slice(Label::Legitimate);
    Ok(DistributionSpec::new(poison.p_max(), PerClass::new(0.0, 1.0))
        .with_component(Label::Legitimate, AttackFlag::Clean, ComponentDistribution::pool(clean))
        .with_component(
            Label::Malicious,
            AttackFlag::Attacked,
            ComponentDistribution::pool(attacked),
        ))
}
