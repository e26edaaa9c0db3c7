use super::{
    build_spoof_pool, AttackBudget, AttackScenario, GeneratorKind, GreedyEvasion,
};
use crate::classifiers::TrainedModel;
use crate::data::{AttackFlag, Dataset, Label, Phase, Sample, ScenarioPools};
use crate::error::{Error, Result};

/// Refuses scenarios whose strategy reaches data the capability forbids.
pub fn enforce_capability(scenario: &AttackScenario) -> Result<()> {
    let cap = &scenario.capability;
    for (phase, allowed) in [
        (Phase::Training, cap.affects_training),
        (Phase::Testing, cap.affects_testing),
    ] {
        if scenario.affects(phase) && !allowed {
            return Err(Error::CapabilityViolation(format!(
                "strategy attacks {phase:?} data but the adversary cannot reach it"
            )));
        }
        let f = scenario.strategy.attacked_fraction.get(phase);
        for label in Label::ALL {
            if f[label] > cap.controllable[label] {
                return Err(Error::CapabilityViolation(format!(
                    "{phase:?} attacked fraction {} for {label} exceeds controllable fraction {}",
                    f[label], cap.controllable[label]
                )));
            }
        }
    }
    if scenario.strategy.prior_override && !cap.prior_change_allowed {
        return Err(Error::CapabilityViolation(
            "strategy changes class priors but capability forbids it".into(),
        ));
    }
    Ok(())
}

/// Clean and attacked pools for one fold at one attack strength.
///
/// Clean pools are the per-class slices of the fold's training and testing
/// sets. Attacked pools come from the scenario's generator: evasion and
/// spoofing transform the malicious testing samples one to one, poisoning
/// reuses the malicious testing samples as training attack samples.
/// `target` is the model under attack, needed by evasion only. At strength
/// zero no attacked pools are built.
pub fn build_scenario_pools(
    d_tr: &Dataset,
    d_ts: &Dataset,
    scenario: &AttackScenario,
    strength: f64,
    target: Option<&TrainedModel>,
    seed: u64,
) -> Result<ScenarioPools> {
    enforce_capability(scenario)?;
    let mut pools = ScenarioPools::new();
    for (phase, data) in [(Phase::Training, d_tr), (Phase::Testing, d_ts)] {
        for label in Label::ALL {
            pools.insert(phase, label, AttackFlag::Clean, data.label_slice(label));
        }
    }
    let active = strength != 0.0
        && (scenario.affects(Phase::Training) || scenario.affects(Phase::Testing));
    if !active {
        return Ok(pools);
    }
    let ts_malicious = d_ts.label_slice(Label::Malicious);
    match scenario.strategy.generator {
        GeneratorKind::None => {}
        GeneratorKind::GoodWordBadWord => {
            if !scenario.knowledge.parameters {
                return Err(Error::InconsistentScenario(
                    "greedy evasion requires knowledge of the classifier parameters".into(),
                ));
            }
            let model = target.and_then(TrainedModel::as_linear).ok_or_else(|| {
                Error::InconsistentScenario("greedy evasion requires a linear model".into())
            })?;
            if !(strength >= 0.0 && strength.fract() == 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "n_max must be a nonnegative integer, got {strength}"
                )));
            }
            let budget = AttackBudget::new(strength as usize, model.dimension())?;
            let attack = GreedyEvasion::new(model);
            let mut out = Dataset::new(ts_malicious.dimension());
            for s in &ts_malicious {
                out.push(Sample::attacked(
                    attack.attack(&s.features, budget.n_max())?,
                    Label::Malicious,
                ))?;
            }
            pools.insert_aligned(Phase::Testing, Label::Malicious, out);
        }
        GeneratorKind::Spoof { target } => {
            let genuine = d_ts.label_slice(Label::Legitimate);
            let out = build_spoof_pool(&ts_malicious, &genuine, target, seed)?;
            pools.insert_aligned(Phase::Testing, Label::Malicious, out);
        }
        GeneratorKind::PoisonFromTestMalicious => {
            let out = Dataset::from_samples(
                ts_malicious.dimension(),
                ts_malicious
                    .iter()
                    .map(|s| Sample::attacked(s.features.clone(), Label::Malicious))
                    .collect(),
            )?;
            pools.insert(Phase::Training, Label::Malicious, AttackFlag::Attacked, out);
        }
    }
    Ok(pools)
}
