use serde::{Deserialize, Serialize};

use super::gamma::{fit_gamma, GammaParams, ZERO_SHIFT};
use super::Score;
use crate::data::{Dataset, Label, PerClass};
use crate::error::{Error, Result};

/// Likelihood-ratio fusion of (fingerprint, face) scores with class
/// conditionals modelled as a product of two independent Gammas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionModel {
    /// Per class, Gamma parameters for [fingerprint, face].
    pub densities: PerClass<[GammaParams; 2]>,
    /// Accept as legitimate when p(x | L) / p(x | M) >= threshold.
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlrDecision {
    pub label: Label,
    /// Both class densities vanished; the decision fell back to `Malicious`.
    pub underflow: bool,
}

fn class_values(data: &Dataset, label: Label, feature: usize) -> Vec<f64> {
    data.iter()
        .filter(|s| s.label == label)
        .map(|s| s.features[feature])
        .collect()
}

/// Fits both class-conditional Gamma products by maximum likelihood.
pub fn fit_gamma_product(scores: &Dataset, threshold: f64) -> Result<FusionModel> {
    if scores.dimension() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: scores.dimension(),
        });
    }
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "LLR threshold must be positive, got {threshold}"
        )));
    }
    let fit_class = |label: Label| -> Result<[GammaParams; 2]> {
        let fing = fit_gamma(&class_values(scores, label, 0))
            .map_err(|e| annotate(e, label, "fingerprint"))?;
        let face = fit_gamma(&class_values(scores, label, 1))
            .map_err(|e| annotate(e, label, "face"))?;
        Ok([fing, face])
    };
    Ok(FusionModel {
        densities: PerClass::new(fit_class(Label::Legitimate)?, fit_class(Label::Malicious)?),
        threshold,
    })
}

fn annotate(e: Error, label: Label, feature: &str) -> Error {
    match e {
        Error::DegenerateScores(msg) => {
            Error::DegenerateScores(format!("class {label}, {feature}: {msg}"))
        }
        other => other,
    }
}

impl FusionModel {
    fn log_density(&self, label: Label, x: &[f64]) -> f64 {
        self.densities[label]
            .iter()
            .zip(x)
            .map(|(p, &v)| p.log_density(if v <= 0.0 { ZERO_SHIFT } else { v }))
            .sum()
    }

    /// log p(x | L) - log p(x | M); `None` when both densities underflow
    /// to zero in double precision.
    pub fn log_ratio(&self, x: &[f64]) -> Option<f64> {
        let l = self.log_density(Label::Legitimate, x);
        let m = self.log_density(Label::Malicious, x);
        if l.exp() == 0.0 && m.exp() == 0.0 {
            None
        } else {
            Some(l - m)
        }
    }
}

pub fn llr_decide(model: &FusionModel, x: &[f64]) -> LlrDecision {
    match model.log_ratio(x) {
        None => LlrDecision {
            label: Label::Malicious,
            underflow: true,
        },
        Some(r) => LlrDecision {
            label: if r >= model.threshold.ln() {
                Label::Legitimate
            } else {
                Label::Malicious
            },
            underflow: false,
        },
    }
}

/// -log(ratio), clamped to finite values; larger means more malicious.
pub fn llr_score(model: &FusionModel, x: &[f64]) -> Score {
    match model.log_ratio(x) {
        None => Score(f64::MAX),
        Some(r) => Score((-r).clamp(f64::MIN, f64::MAX)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model_with(l: [GammaParams; 2], m: [GammaParams; 2], t: f64) -> FusionModel {
        FusionModel {
            densities: PerClass::new(l, m),
            threshold: t,
        }
    }

    const G: GammaParams = GammaParams {
        shape: 2.0,
        scale: 0.5,
    };

    #[test]
    fn equal_densities_give_unit_ratio() {
        let m = model_with([G, G], [G, G], 1.0);
        for x in [[0.1, 0.9], [3.0, 0.2]] {
            assert_eq!(m.log_ratio(&x), Some(0.0));
            assert_eq!(llr_decide(&m, &x).label, Label::Legitimate);
            assert_eq!(llr_score(&m, &x).0, 0.0);
        }
    }

    #[test]
    fn ratio_branches() {
        // Legitimate density is the malicious one scaled so the ratio is a constant c.
        // Using the exponential case (shape 1): p_L / p_M = (theta_M / theta_L) exp(x (1/theta_M - 1/theta_L)).
        // With equal scales in one coordinate and x = 0-shift, only the chosen constant remains.
        let e = |scale: f64| GammaParams { shape: 1.0, scale };
        let x = [ZERO_SHIFT, ZERO_SHIFT];
        let ratio = |m: &FusionModel| m.log_ratio(&x).unwrap().exp();

        let m = model_with([e(1.0), e(1.0)], [e(1.5), e(1.0)], 1.0);
        assert!((ratio(&m) - 1.5).abs() < 1e-6);
        assert_eq!(llr_decide(&m, &x).label, Label::Legitimate);

        let m = model_with([e(1.0), e(1.0)], [e(0.99), e(1.0)], 1.0);
        assert!((ratio(&m) - 0.99).abs() < 1e-6);
        assert_eq!(llr_decide(&m, &x).label, Label::Malicious);
    }

    #[test]
    fn underflow_breaks_tie_to_malicious() {
        // Shape > 1 puts zero density at 0; far-away points underflow both classes.
        let g = GammaParams {
            shape: 50.0,
            scale: 0.01,
        };
        let m = model_with([g, g], [g, g], 1.0);
        let d = llr_decide(&m, &[1e6, 1e6]);
        assert_eq!(d.label, Label::Malicious);
        assert!(d.underflow);
        assert!(llr_score(&m, &[1e6, 1e6]).0.is_finite());
    }

    #[test]
    fn identical_class_scores_fit_identically() {
        let mut data = Dataset::new(2);
        for i in 0..30 {
            let v = [0.05 + (i as f64 * 0.61).sin().abs(), 0.1 + (i as f64 * 0.29).cos().abs()];
            for label in Label::ALL {
                data.push(crate::data::Sample::new(v.to_vec(), label)).unwrap();
            }
        }
        let m = fit_gamma_product(&data, 1.0).unwrap();
        assert_eq!(m.densities.legitimate, m.densities.malicious);
    }
}
