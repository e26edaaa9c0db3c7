use std::fs;
use std::path::PathBuf;

use clfsec::classifiers::Score;
use clfsec::config::{DataSource, ScenarioConfig};
use clfsec::data::{Dataset, Label, ResampleMethod, Sample};
use clfsec::evaluation::{
    auc10, far_at_gar, metric_value, rates_at_threshold, roc, roc_biometric, ClassifierConfig,
    EvaluationReport, Metric,
};
use clfsec::ingestion::{write_tabular, TabularFormat};
use clfsec::pipeline::{self, RunOptions};
use proptest::prelude::*;

fn labelled(raw: &[(f64, bool)]) -> Vec<(Score, Label)> {
    raw.iter()
        .map(|&(s, m)| (Score(s), if m { Label::Malicious } else { Label::Legitimate }))
        .collect()
}

fn scores_strategy() -> impl Strategy<Value = Vec<(f64, bool)>> {
    prop::collection::vec((-20i32..20, any::<bool>()), 2..60)
        .prop_map(|v| v.into_iter().map(|(s, m)| (f64::from(s) / 4.0, m)).collect())
        .prop_filter("both classes", |v: &Vec<(f64, bool)>| {
            v.iter().any(|x| x.1) && v.iter().any(|x| !x.1)
        })
}

proptest! {
    #[test]
    fn roc_is_invariant_under_monotone_transforms(raw in scores_strategy()) {
        let base = labelled(&raw);
        let moved: Vec<(Score, Label)> = base
            .iter()
            .map(|(s, l)| (Score((s.0 / 3.0).exp() + 2.0 * s.0 - 7.0), *l))
            .collect();
        prop_assert_eq!(roc(&base).unwrap(), roc(&moved).unwrap());
        prop_assert_eq!(roc_biometric(&base).unwrap(), roc_biometric(&moved).unwrap());
        prop_assert_eq!(
            metric_value(Metric::Auc10, &base).unwrap(),
            metric_value(Metric::Auc10, &moved).unwrap()
        );
    }

    #[test]
    fn roc_points_are_threshold_rates(raw in scores_strategy()) {
        let scores = labelled(&raw);
        let curve = roc(&scores).unwrap();
        prop_assert_eq!(curve.points[0], (0.0, 0.0));
        prop_assert_eq!(*curve.points.last().unwrap(), (1.0, 1.0));
        prop_assert!(curve.points.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1));
        let mut thresholds: Vec<f64> = raw.iter().map(|r| r.0).collect();
        thresholds.sort_by(|a, b| b.total_cmp(a));
        thresholds.dedup();
        for (i, t) in thresholds.iter().enumerate() {
            let below = thresholds.get(i + 1).copied().unwrap_or(t - 1.0);
            let rates = rates_at_threshold(&scores, (t + below) / 2.0).unwrap();
            prop_assert_eq!(rates, curve.points[i + 1]);
        }
        let a = auc10(&curve);
        prop_assert!((0.0..=0.1).contains(&a));
    }

    #[test]
    fn biometric_roc_mirrors_the_standard_one(raw in scores_strategy()) {
        let scores = labelled(&raw);
        let standard = roc(&scores).unwrap();
        let bio = roc_biometric(&scores).unwrap();
        let mirrored: Vec<(f64, f64)> = standard
            .points
            .iter()
            .rev()
            .map(|&(fp, tp)| (1.0 - tp, 1.0 - fp))
            .collect();
        prop_assert_eq!(bio.points.len(), mirrored.len());
        for (a, b) in bio.points.iter().zip(&mirrored) {
            prop_assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12, "{:?} vs {:?}", a, b);
        }
        let r = far_at_gar(&bio, 1.0);
        prop_assert!(r.reachable);
    }
}

fn small_spam() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::canned("spam_gwi_bwo").unwrap();
    cfg.data.samples = Some(240);
    cfg.data.features = Some(24);
    cfg.data.resampling = ResampleMethod::CrossValidation { k: 3 };
    cfg.classifiers[0].config = ClassifierConfig::linear_svm(1.0);
    cfg.attack.strength.values = vec![0.0, 2.0, 6.0];
    cfg.evaluation.repetitions = 2;
    cfg
}

#[test]
fn evaluate_writes_reports_that_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_spam();
    let opts = RunOptions {
        seed: Some(9),
        out: dir.path().to_path_buf(),
        jobs: Some(2),
    };
    let summary = pipeline::evaluate(&cfg, &opts).unwrap();
    assert_eq!(summary.reports.len(), 2);
    for (report, path) in summary.reports.iter().zip(&summary.report_paths) {
        let back = EvaluationReport::from_json(&fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(&back, report);
        assert_eq!(report.seed, 9);
        assert_eq!(report.curve.k, 6);
        assert_eq!(report.curve.measurements.len(), 3);
        assert!(report.curve.measurements.iter().all(|row| row.len() == 6));
    }
    for path in &summary.csv_paths {
        let text = fs::read_to_string(path).unwrap();
        assert_eq!(text.lines().next().unwrap(), "strength,mean,std,k");
        assert_eq!(text.lines().count(), 4);
    }
    assert!(summary.lines.iter().any(|l| l == "folds=3"));
}

#[test]
fn report_rejects_mismatched_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let spam = pipeline::evaluate(
        &small_spam(),
        &RunOptions { seed: None, out: dir.path().join("spam"), jobs: None },
    )
    .unwrap();
    let mut ids = ScenarioConfig::canned("ids_poison").unwrap();
    ids.attack.strength.values = vec![0.0, 0.05];
    ids.classifiers.truncate(1);
    let ids = pipeline::evaluate(
        &ids,
        &RunOptions { seed: None, out: dir.path().join("ids"), jobs: None },
    )
    .unwrap();
    let inputs = vec![spam.report_paths[0].clone(), ids.report_paths[0].clone()];
    let err = pipeline::report(&inputs, &dir.path().join("fig")).unwrap_err();
    let text = err.to_string();
    assert!(text.contains("n_max") && text.contains("p_max"), "{text}");
}

#[test]
fn prepare_with_separate_test_file_reproduces_the_data() {
    let dir = tempfile::tempdir().unwrap();
    let make = |offset: f64| {
        let samples = (0..20)
            .map(|i| {
                let label = if i % 2 == 0 { Label::Legitimate } else { Label::Malicious };
                Sample::new(vec![f64::from(i) + offset, f64::from(i % 3)], label)
            })
            .collect();
        Dataset::from_samples(2, samples).unwrap()
    };
    let (train, test) = (make(0.0), make(0.5));
    write_tabular(&train, &dir.path().join("train.txt"), TabularFormat::Dense).unwrap();
    write_tabular(&test, &dir.path().join("test.txt"), TabularFormat::Sparse).unwrap();

    let mut cfg = ScenarioConfig::canned("ids_poison").unwrap();
    cfg.data.source = DataSource::Tabular;
    cfg.data.path = Some(PathBuf::from("train.txt"));
    cfg.data.test_path = Some(PathBuf::from("test.txt"));
    cfg.base_dir = Some(dir.path().to_path_buf());
    let out = dir.path().join("out");
    let opts = RunOptions { seed: Some(1), out: out.clone(), jobs: None };
    let manifest = pipeline::prepare(&cfg, &opts).unwrap();
    assert_eq!(manifest.files.len(), 2);
    assert!(manifest.files.iter().all(|f| f.samples == 20 && f.dimension == 2));
    let reloaded = clfsec::ingestion::load_tabular(&out.join("data/test.csv")).unwrap();
    assert_eq!(reloaded, test);
    for f in &manifest.files {
        let bytes = fs::read(out.join(&f.path)).unwrap();
        assert_eq!(pipeline::sha256_hex(&bytes), f.sha256);
    }
    let again = pipeline::prepare(&cfg, &opts).unwrap();
    assert_eq!(again, manifest);
}
