use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{metric_value, score_dataset, train_classifier, ClassifierConfig, Metric, RocCurve, SecurityCurve};
use crate::attacks::{build_scenario_pools, check_scenario_consistency, enforce_capability, AttackScenario};
use crate::classifiers::{Score, TrainedModel};
use crate::data::{
    sample_dataset, AttackFlag, Dataset, FoldSet, GenerationMode, Label, Phase, Sample,
    ScenarioPools,
};
use crate::error::{Error, Result};
use crate::rng::{bernoulli, derive_seed, rng_from_seed, Stream};

/// How TR and TS are built from a phase's data model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Keep the fold's samples and substitute or add attack samples:
    /// each sample of class y is replaced by its attacked image with
    /// probability p(A = attacked | y); a prior override keeps the clean
    /// legitimate samples and appends enough attack samples to reach the
    /// requested malicious fraction. At strength zero the fold is used as is.
    #[default]
    Stratified,
    /// Draw every sample from the phase's distribution spec.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub seed: u64,
    pub construction: Construction,
    pub mode: GenerationMode,
    /// Sizes of TR and TS in sampled construction; default to the fold sizes.
    pub training_size: Option<usize>,
    pub testing_size: Option<usize>,
    /// Independent constructions of TR/TS per fold.
    pub repetitions: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Keep a pooled ROC curve per strength.
    pub keep_roc: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            construction: Construction::Stratified,
            mode: GenerationMode::Iid,
            training_size: None,
            testing_size: None,
            repetitions: 1,
            jobs: None,
            keep_roc: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocEntry {
    pub strength: f64,
    pub curve: RocCurve,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub curve: SecurityCurve,
    pub rocs: Vec<RocEntry>,
}

/// TR or TS for one phase at one strength.
#[allow(clippy::too_many_arguments)]
pub fn build_phase_dataset(
    scenario: &AttackScenario,
    phase: Phase,
    strength: f64,
    clean: &Dataset,
    pools: &ScenarioPools,
    construction: Construction,
    options: (GenerationMode, Option<usize>),
    seed: u64,
) -> Result<Dataset> {
    match construction {
        Construction::Sampled => {
            let spec = scenario
                .phase_spec(phase, strength, clean, pools)
                .with_mode(options.0);
            sample_dataset(&spec, options.1.unwrap_or(clean.len()), seed)
        }
        Construction::Stratified => stratified(scenario, phase, strength, clean, pools, seed),
    }
}

fn attacked_pool(pools: &ScenarioPools, phase: Phase, label: Label) -> Result<&Dataset> {
    match pools.get(phase, label, AttackFlag::Attacked) {
        Some(p) if !p.is_empty() => Ok(p),
        _ => Err(Error::EmptyPool {
            label,
            flag: AttackFlag::Attacked,
        }),
    }
}

fn stratified(
    scenario: &AttackScenario,
    phase: Phase,
    strength: f64,
    clean: &Dataset,
    pools: &ScenarioPools,
    seed: u64,
) -> Result<Dataset> {
    let affected = scenario.affects(phase);
    let mut rng = rng_from_seed(seed);
    if affected && scenario.strategy.prior_override {
        let mut out = clean.label_slice(Label::Legitimate);
        let p = strength;
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "malicious prior must lie in [0, 1), got {p}"
            )));
        }
        if p == 0.0 {
            return Ok(out);
        }
        let m = (p / (1.0 - p) * out.len() as f64).round() as usize;
        let pool = attacked_pool(pools, phase, Label::Malicious)?;
        for _ in 0..m {
            let i = rng.random_range(0..pool.len() as u64) as usize;
            out.push(Sample::attacked(pool.samples()[i].features.clone(), Label::Malicious))?;
        }
        return Ok(out);
    }
    if strength == 0.0 || !affected {
        return Ok(clean.clone());
    }
    let mut out = Dataset::new(clean.dimension());
    let mut seen = [0usize; 2];
    for s in clean {
        let within = seen[s.label as usize];
        seen[s.label as usize] += 1;
        let p = scenario.attack_prob(phase, s.label, strength);
        if !bernoulli(&mut rng, p) {
            out.push(Sample::new(s.features.clone(), s.label))?;
            continue;
        }
        let pool = attacked_pool(pools, phase, s.label)?;
        let x = if pools.is_aligned(phase, s.label) {
            pool.samples()[within].features.clone()
        } else {
            pool.samples()[rng.random_range(0..pool.len() as u64) as usize]
                .features
                .clone()
        };
        out.push(Sample::attacked(x, s.label))?;
    }
    Ok(out)
}

struct Unit<'a> {
    fold: usize,
    rep: usize,
    train: &'a Dataset,
    test: &'a Dataset,
}

impl Unit<'_> {
    fn seed(&self, master: u64, stream: Stream) -> u64 {
        derive_seed(master, stream, self.fold as u64, self.rep as u64)
    }
}

fn annotate(fold: usize, strength: f64) -> impl Fn(Error) -> Error {
    move |e| Error::Sweep {
        fold,
        strength,
        source: Box::new(e),
    }
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Metric of `classifier` against `scenario` for every fold and strength.
///
/// Exploratory scenarios train once per fold; causative scenarios retrain
/// for every strength. Randomness depends only on (seed, fold, repetition),
/// never on the strength or on scheduling.
pub fn security_sweep(
    folds: &FoldSet,
    scenario: &AttackScenario,
    classifier: &ClassifierConfig,
    strengths: &[f64],
    metric: Metric,
    options: &SweepOptions,
) -> Result<SweepResult> {
    if !strengths.contains(&0.0) {
        return Err(Error::InvalidParameter(
            "strength values must include 0".into(),
        ));
    }
    let issues = check_scenario_consistency(scenario);
    if !issues.is_empty() {
        let text: Vec<String> = issues.iter().map(|i| i.to_string()).collect();
        return Err(Error::InconsistentScenario(text.join("; ")));
    }
    enforce_capability(scenario)?;

    let reps = options.repetitions.max(1);
    let units: Vec<Unit> = folds
        .pairs
        .iter()
        .enumerate()
        .flat_map(|(fold, (train, test))| {
            (0..reps).map(move |rep| Unit {
                fold,
                rep,
                train,
                test,
            })
        })
        .collect();
    let master = options.seed;
    let exploratory = !scenario.affects(Phase::Training);

    let phase_data = |unit: &Unit, phase: Phase, strength: f64, pools: &ScenarioPools| {
        let (clean, size, stream) = match phase {
            Phase::Training => (unit.train, options.training_size, Stream::Training),
            Phase::Testing => (unit.test, options.testing_size, Stream::Testing),
        };
        build_phase_dataset(
            scenario,
            phase,
            strength,
            clean,
            pools,
            options.construction,
            (options.mode, size),
            unit.seed(master, stream),
        )
    };

    let evaluate = |unit: &Unit, strength: f64, model: Option<&TrainedModel>| -> Result<Vec<(Score, Label)>> {
        let pool_seed = unit.seed(master, Stream::AttackPool);
        let model_seed = unit.seed(master, Stream::Model);
        let pools = build_scenario_pools(unit.train, unit.test, scenario, strength, model, pool_seed)?;
        let trained;
        let model = match model {
            Some(m) => m,
            None => {
                let tr = phase_data(unit, Phase::Training, strength, &pools)?;
                trained = train_classifier(classifier, &tr, model_seed)?;
                &trained
            }
        };
        let ts = phase_data(unit, Phase::Testing, strength, &pools)?;
        score_dataset(model, &ts)
    };

    let scores: Vec<Vec<Vec<(Score, Label)>>> = in_pool(options.jobs, || {
        let models: Vec<Option<TrainedModel>> = if exploratory {
            units
                .par_iter()
                .map(|u| {
                    let pools = build_scenario_pools(u.train, u.test, scenario, 0.0, None, 0)?;
                    let tr = phase_data(u, Phase::Training, 0.0, &pools)?;
                    train_classifier(classifier, &tr, u.seed(master, Stream::Model)).map(Some)
                })
                .enumerate()
                .map(|(i, r)| r.map_err(annotate(units[i].fold, 0.0)))
                .collect::<Result<_>>()?
        } else {
            units.iter().map(|_| None).collect()
        };
        let items: Vec<(usize, f64)> = (0..units.len())
            .flat_map(|u| strengths.iter().map(move |&s| (u, s)))
            .collect();
        let flat: Vec<Vec<(Score, Label)>> = items
            .par_iter()
            .map(|&(u, s)| {
                evaluate(&units[u], s, models[u].as_ref()).map_err(annotate(units[u].fold, s))
            })
            .collect::<Result<_>>()?;
        let mut by_strength: Vec<Vec<Vec<(Score, Label)>>> = vec![Vec::new(); strengths.len()];
        for (i, sc) in flat.into_iter().enumerate() {
            by_strength[i % strengths.len()].push(sc);
        }
        Ok::<_, Error>(by_strength)
    })??;

    let mut measurements = Vec::with_capacity(strengths.len());
    let mut rocs = Vec::new();
    for (si, per_unit) in scores.iter().enumerate() {
        let mut row = Vec::with_capacity(per_unit.len());
        for (ui, sc) in per_unit.iter().enumerate() {
            row.push(metric_value(metric, sc).map_err(annotate(units[ui].fold, strengths[si]))?);
        }
        measurements.push(row);
        if options.keep_roc {
            let pooled: Vec<(Score, Label)> = per_unit.iter().flatten().copied().collect();
            rocs.push(RocEntry {
                strength: strengths[si],
                curve: metric.curve(&pooled)?,
            });
        }
    }
    Ok(SweepResult {
        curve: SecurityCurve::from_measurements(
            scenario.strength.param.name(),
            strengths.to_vec(),
            measurements,
        ),
        rocs,
    })
}

/// Attack-free train/test evaluation on every fold, with the same seeds the
/// sweep uses for its models.
pub fn plain_evaluation(
    folds: &FoldSet,
    classifier: &ClassifierConfig,
    metric: Metric,
    seed: u64,
) -> Result<Vec<f64>> {
    folds
        .pairs
        .iter()
        .enumerate()
        .map(|(fold, (train, test))| {
            let model = train_classifier(
                classifier,
                train,
                derive_seed(seed, Stream::Model, fold as u64, 0),
            )?;
            metric_value(metric, &score_dataset(&model, test)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacks::canned;
    use crate::data::{resample, ResampleMethod};

    fn binary_task(n: usize, d: usize, seed: u64) -> Dataset {
        let mut rng = rng_from_seed(seed);
        let mut out = Dataset::new(d);
        for i in 0..n {
            let label = if i % 2 == 0 { Label::Legitimate } else { Label::Malicious };
            let x: Vec<f64> = (0..d)
                .map(|j| {
                    let p = match (label, j < d / 2) {
                        (Label::Malicious, true) | (Label::Legitimate, false) => 0.6,
                        _ => 0.2,
                    };
                    if bernoulli(&mut rng, p) { 1.0 } else { 0.0 }
                })
                .collect();
            out.push(Sample::new(x, label)).unwrap();
        }
        out
    }

    #[test]
    fn evasion_curve_starts_at_plain_value_and_decreases() {
        let data = binary_task(120, 10, 5);
        let folds = resample(&data, ResampleMethod::CrossValidation { k: 3 }, 1).unwrap();
        let strengths: Vec<f64> = (0..=10).map(f64::from).collect();
        let s = canned::spam_evasion(strengths.clone());
        let cfg = ClassifierConfig::linear_svm(1.0);
        let opts = SweepOptions {
            seed: 9,
            ..Default::default()
        };
        let r = security_sweep(&folds, &s, &cfg, &strengths, Metric::Auc10, &opts).unwrap();
        let plain = plain_evaluation(&folds, &cfg, Metric::Auc10, 9).unwrap();
        assert_eq!(r.curve.measurements[0], plain);
        for w in r.curve.mean.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "{:?}", r.curve.mean);
        }
        assert_eq!(*r.curve.mean.last().unwrap(), 0.0);
    }

    #[test]
    fn job_count_does_not_change_results() {
        let data = binary_task(60, 6, 2);
        let folds = resample(&data, ResampleMethod::CrossValidation { k: 2 }, 4).unwrap();
        let strengths = [0.0, 1.0, 2.0];
        let s = canned::spam_evasion(strengths.to_vec());
        let cfg = ClassifierConfig::linear_svm(1.0);
        let run = |jobs| {
            let opts = SweepOptions {
                seed: 3,
                jobs,
                ..Default::default()
            };
            security_sweep(&folds, &s, &cfg, &strengths, Metric::Auc10, &opts)
                .unwrap()
                .curve
        };
        assert_eq!(run(Some(1)), run(Some(4)));
    }

    #[test]
    fn strengths_without_zero_are_rejected() {
        let data = binary_task(20, 4, 2);
        let folds = resample(&data, ResampleMethod::CrossValidation { k: 2 }, 4).unwrap();
        let s = canned::spam_evasion(vec![1.0]);
        let r = security_sweep(
            &folds,
            &s,
            &ClassifierConfig::linear_svm(1.0),
            &[1.0],
            Metric::Auc10,
            &SweepOptions::default(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn prior_override_appends_attack_samples() {
        let legit = Dataset::from_samples(
            1,
            (0..100).map(|i| Sample::new(vec![i as f64], Label::Legitimate)).collect(),
        )
        .unwrap();
        let ts = Dataset::from_samples(
            1,
            vec![
                Sample::new(vec![-5.0], Label::Malicious),
                Sample::new(vec![1.0], Label::Legitimate),
            ],
        )
        .unwrap();
        let s = canned::ids_poisoning(vec![0.0, 0.2]);
        let pools = build_scenario_pools(&legit, &ts, &s, 0.2, None, 0).unwrap();
        let tr = build_phase_dataset(
            &s,
            Phase::Training,
            0.2,
            &legit,
            &pools,
            Construction::Stratified,
            (GenerationMode::Iid, None),
            1,
        )
        .unwrap();
        assert_eq!(tr.count(Label::Legitimate), 100);
        assert_eq!(tr.count(Label::Malicious), 25);
        assert!(tr
            .iter()
            .filter(|x| x.label == Label::Malicious)
            .all(|x| x.features == vec![-5.0] && x.flag == AttackFlag::Attacked));
    }

    #[test]
    fn sampled_construction_has_requested_size() {
        let data = binary_task(40, 4, 8);
        let folds = resample(&data, ResampleMethod::Chronological { split_index: 20 }, 0).unwrap();
        let (tr, ts) = &folds.pairs[0];
        let s = canned::spam_evasion(vec![0.0]);
        let pools = build_scenario_pools(tr, ts, &s, 0.0, None, 0).unwrap();
        let out = build_phase_dataset(
            &s,
            Phase::Testing,
            0.0,
            ts,
            &pools,
            Construction::Sampled,
            (GenerationMode::Iid, Some(55)),
            3,
        )
        .unwrap();
        assert_eq!(out.len(), 55);
    }
}
