mod common;

use clfsec::attacks::GreedyEvasion;
use clfsec::classifiers::{
    decision_score, fit_gamma, fit_linear_svm, fit_one_class_svm, logistic_gradient,
    logistic_loss, LinearModel, TrainedModel,
};
use clfsec::data::Label;
use common::{hamming_ball_min, random_labelled, random_points};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma};

#[test]
fn gamma_fit_recovers_parameters() {
    let mut rng = ChaCha20Rng::seed_from_u64(17);
    for (shape, scale) in [(2.5, 0.8), (0.7, 3.0), (9.0, 0.1)] {
        let dist = Gamma::new(shape, scale).unwrap();
        let xs: Vec<f64> = (0..50_000).map(|_| dist.sample(&mut rng)).collect();
        let fit = fit_gamma(&xs).unwrap();
        assert!((fit.shape / shape - 1.0).abs() < 0.03, "shape {} vs {shape}", fit.shape);
        assert!((fit.scale / scale - 1.0).abs() < 0.03, "scale {} vs {scale}", fit.scale);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((fit.mean() / mean - 1.0).abs() < 1e-6);
    }
}

#[test]
fn gamma_fit_on_exponential_data_has_unit_shape() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let dist = rand_distr::Exp::new(0.5).unwrap();
    let xs: Vec<f64> = (0..50_000).map(|_| dist.sample(&mut rng)).collect();
    let fit = fit_gamma(&xs).unwrap();
    assert!((fit.shape - 1.0).abs() < 0.03, "shape {}", fit.shape);
    assert!((fit.scale - 2.0).abs() < 0.06, "scale {}", fit.scale);
}

#[test]
fn gamma_fit_rejects_constant_values() {
    assert!(fit_gamma(&[1.0; 10]).is_err());
}

#[test]
fn separable_svm_classifies_training_set() {
    let data = random_labelled(60, 3, 8);
    let fit = fit_linear_svm(&data, 10.0, 1e-8).unwrap();
    assert!(fit.duality_gap() <= 1e-8 * (1.0 + fit.primal.abs()) + 1e-12);
    let model = TrainedModel::Linear(fit.model);
    let correct = data
        .iter()
        .filter(|s| model.decide(&s.features).unwrap() == s.label)
        .count();
    assert!(correct as f64 >= 0.9 * data.len() as f64);
}

#[test]
fn model_documents_round_trip() {
    let data = random_points(40, 2, 1);
    let oc = TrainedModel::OneClass(fit_one_class_svm(&data, 0.2, 0.5, 1e-6).unwrap().model);
    let lin = TrainedModel::Linear(LinearModel::new(vec![1.5, -2.0], 0.25));
    for model in [oc, lin] {
        let back = TrainedModel::from_document(&model.to_document().unwrap()).unwrap();
        assert_eq!(back, model);
        let x = [0.3, -0.4];
        assert_eq!(decision_score(&back, &x).unwrap(), decision_score(&model, &x).unwrap());
    }
}

#[test]
fn one_class_scores_far_points_as_malicious() {
    let data = random_points(100, 2, 4);
    let model = TrainedModel::OneClass(fit_one_class_svm(&data, 0.1, 0.5, 1e-6).unwrap().model);
    let inliers = data
        .iter()
        .filter(|s| model.decide(&s.features).unwrap() == Label::Legitimate)
        .count();
    assert!(inliers >= 88, "{inliers}");
    assert_eq!(model.decide(&[20.0, 20.0]).unwrap(), Label::Malicious);
    let far = decision_score(&model, &[20.0, 20.0]).unwrap().0;
    assert!(data.iter().all(|s| decision_score(&model, &s.features).unwrap().0 < far));
}

fn binary(bits: u32, d: usize) -> Vec<f64> {
    (0..d).map(|i| f64::from(bits >> i & 1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn greedy_evasion_reaches_hamming_ball_minimum(
        weights in prop::collection::vec(-5i32..=5, 1..9),
        bias in -3i32..=3,
        bits in any::<u32>(),
        n_max in 0usize..10,
    ) {
        let d = weights.len();
        let w: Vec<f64> = weights.iter().map(|&v| f64::from(v)).collect();
        let model = LinearModel::new(w.clone(), f64::from(bias));
        let x = binary(bits, d);
        let attacked = GreedyEvasion::new(&model).attack(&x, n_max).unwrap();
        let flips = x.iter().zip(&attacked).filter(|(a, b)| a != b).count();
        prop_assert!(flips <= n_max);
        prop_assert!(attacked.iter().all(|&v| v == 0.0 || v == 1.0));
        prop_assert_eq!(model.discriminant(&attacked), hamming_ball_min(&w, f64::from(bias), &x, n_max));
    }

    #[test]
    fn logistic_gradient_matches_finite_differences(
        seed in 0u64..1000,
        w in prop::collection::vec(-2.0f64..2.0, 3),
        b in -1.0f64..1.0,
    ) {
        let data = random_labelled(25, 3, seed);
        let (gw, gb) = logistic_gradient(&data, &w, b);
        let h = 1e-5;
        for i in 0..3 {
            let (mut up, mut down) = (w.clone(), w.clone());
            up[i] += h;
            down[i] -= h;
            let fd = (logistic_loss(&data, &up, b) - logistic_loss(&data, &down, b)) / (2.0 * h);
            prop_assert!((fd - gw[i]).abs() <= 1e-6 * (1.0 + fd.abs()), "{} vs {}", fd, gw[i]);
        }
        let fd = (logistic_loss(&data, &w, b + h) - logistic_loss(&data, &w, b - h)) / (2.0 * h);
        prop_assert!((fd - gb).abs() <= 1e-6 * (1.0 + fd.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nu_bounds_outliers_and_support_vectors(
        seed in 0u64..10_000,
        nu in 0.05f64..0.5,
        gamma in 0.1f64..2.0,
    ) {
        let n = 120;
        let data = random_points(n, 2, seed);
        let fit = fit_one_class_svm(&data, nu, gamma, 1e-8).unwrap();
        let outliers = data
            .iter()
            .filter(|s| fit.model.decision_function(&s.features) < 0.0)
            .count() as f64;
        let support = fit.alpha.iter().filter(|&&a| a > 0.0).count() as f64;
        let slack = 2.0 / n as f64;
        prop_assert!(outliers / n as f64 <= nu + slack, "outliers {}", outliers);
        prop_assert!(support / n as f64 >= nu - slack, "support {}", support);
        prop_assert!((fit.alpha.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
