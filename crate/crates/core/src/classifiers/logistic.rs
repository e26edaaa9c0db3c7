use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::kernel::dot;
use super::LinearModel;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::{child_seed, rng_from_seed};

/// Online gradient descent settings. Step t uses `eta0 / (1 + t / decay_steps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticConfig {
    pub eta0: f64,
    pub epochs: usize,
    pub decay_steps: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            eta0: 0.1,
            epochs: 20,
            decay_steps: 1000.0,
        }
    }
}

/// log(1 + exp(z)) without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Summed logistic loss, sum_i log(1 + exp(-y_i g(x_i))) with y in {-1, +1}.
pub fn logistic_loss(data: &Dataset, weights: &[f64], bias: f64) -> f64 {
    data.iter()
        .map(|s| softplus(-s.label.sign() * (dot(weights, &s.features) + bias)))
        .sum()
}

/// Gradient of [`logistic_loss`] with respect to (weights, bias).
pub fn logistic_gradient(data: &Dataset, weights: &[f64], bias: f64) -> (Vec<f64>, f64) {
    let mut gw = vec![0.0; weights.len()];
    let mut gb = 0.0;
    for s in data {
        let y = s.label.sign();
        let coef = -y * sigmoid(-y * (dot(weights, &s.features) + bias));
        for (g, x) in gw.iter_mut().zip(&s.features) {
            *g += coef * x;
        }
        gb += coef;
    }
    (gw, gb)
}

/// Unregularised logistic regression trained one sample at a time.
///
/// Weights start at zero and the visiting order is reshuffled each epoch
/// from `seed`.
pub fn train_logistic_regression(
    train: &Dataset,
    config: &LogisticConfig,
    seed: u64,
) -> Result<LinearModel> {
    if !train.has_both_classes() {
        return Err(Error::DegenerateTrainingSet(
            "logistic regression needs both classes".into(),
        ));
    }
    if !(config.eta0.is_finite() && config.eta0 > 0.0 && config.decay_steps > 0.0) {
        return Err(Error::InvalidParameter(
            "learning rate and decay must be positive".into(),
        ));
    }
    let mut w = vec![0.0; train.dimension()];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..train.len()).collect();
    let samples = train.samples();
    let mut step = 0usize;
    for epoch in 0..config.epochs {
        order.shuffle(&mut rng_from_seed(child_seed(seed, epoch as u64)));
        let mut epoch_loss = 0.0;
        for &i in &order {
            let s = &samples[i];
            let y = s.label.sign();
            let margin = y * (dot(&w, &s.features) + b);
            epoch_loss += softplus(-margin);
            let eta = config.eta0 / (1.0 + step as f64 / config.decay_steps);
            let coef = eta * y * sigmoid(-margin);
            for (wk, xk) in w.iter_mut().zip(&s.features) {
                *wk += coef * xk;
            }
            b += coef;
            step += 1;
        }
        if !epoch_loss.is_finite() || !b.is_finite() || w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { epoch });
        }
    }
    Ok(LinearModel::new(w, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Label, Sample};

    fn one_d() -> Dataset {
        Dataset::from_samples(
            1,
            vec![
                Sample::new(vec![-1.0], Label::Legitimate),
                Sample::new(vec![1.0], Label::Malicious),
            ],
        )
        .unwrap()
    }

    #[test]
    fn weight_sign_follows_data() {
        let m = train_logistic_regression(&one_d(), &LogisticConfig::default(), 1).unwrap();
        assert!(m.weights[0] > 0.0);
    }

    #[test]
    fn zero_epochs_gives_zero_model() {
        let cfg = LogisticConfig {
            epochs: 0,
            ..LogisticConfig::default()
        };
        let m = train_logistic_regression(&one_d(), &cfg, 1).unwrap();
        assert_eq!(m.weights, vec![0.0]);
        assert_eq!(m.bias, 0.0);
        assert_eq!(m.discriminant(&[123.0]), 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = LogisticConfig::default();
        let a = train_logistic_regression(&one_d(), &cfg, 9).unwrap();
        let b = train_logistic_regression(&one_d(), &cfg, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn huge_rate_diverges() {
        let d = Dataset::from_samples(
            1,
            vec![
                Sample::new(vec![1e300], Label::Legitimate),
                Sample::new(vec![-1e300], Label::Malicious),
            ],
        )
        .unwrap();
        let cfg = LogisticConfig {
            eta0: 1e300,
            epochs: 3,
            decay_steps: 1.0,
        };
        assert!(matches!(
            train_logistic_regression(&d, &cfg, 0),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn softplus_is_stable() {
        assert_eq!(softplus(1000.0), 1000.0);
        assert!(softplus(-1000.0) >= 0.0 && softplus(-1000.0) < 1e-300);
        assert!((softplus(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
    }
}
