use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Parametric class-conditional densities that can be sampled directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticDensity {
    /// N(mean, std^2 I).
    IsotropicGaussian { mean: Vec<f64>, std: f64 },
    /// Independent Gamma(shape_i, scale_i) per coordinate.
    GammaProduct { shape: Vec<f64>, scale: Vec<f64> },
    /// Independent Bernoulli(p_i) per coordinate; values in {0, 1}.
    IndependentBernoulli { p: Vec<f64> },
}

impl AnalyticDensity {
    pub fn dimension(&self) -> usize {
        match self {
            AnalyticDensity::IsotropicGaussian { mean, .. } => mean.len(),
            AnalyticDensity::GammaProduct { shape, .. } => shape.len(),
            AnalyticDensity::IndependentBernoulli { p } => p.len(),
        }
    }

    /// Describes the first invalid parameter, if any.
    pub fn check(&self) -> std::result::Result<(), String> {
        match self {
            AnalyticDensity::IsotropicGaussian { mean, std } => {
                if !(std.is_finite() && *std > 0.0) {
                    return Err(format!("gaussian std must be positive, got {std}"));
                }
                if mean.iter().any(|m| !m.is_finite()) {
                    return Err("gaussian mean must be finite".into());
                }
            }
            AnalyticDensity::GammaProduct { shape, scale } => {
                if shape.len() != scale.len() {
                    return Err("gamma shape and scale lengths differ".into());
                }
                if shape
                    .iter()
                    .chain(scale)
                    .any(|v| !(v.is_finite() && *v > 0.0))
                {
                    return Err("gamma shapes and scales must be positive".into());
                }
            }
            AnalyticDensity::IndependentBernoulli { p } => {
                if p.iter().any(|v| !(0.0..=1.0).contains(v)) {
                    return Err("bernoulli probabilities must lie in [0, 1]".into());
                }
            }
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        self.check().map_err(Error::InvalidSpec)?;
        Ok(match self {
            AnalyticDensity::IsotropicGaussian { mean, std } => {
                let normal = Normal::new(0.0, *std)
                    .map_err(|e| Error::InvalidSpec(e.to_string()))?;
                mean.iter().map(|m| m + normal.sample(rng)).collect()
            }
            AnalyticDensity::GammaProduct { shape, scale } => shape
                .iter()
                .zip(scale)
                .map(|(&k, &theta)| {
                    Gamma::new(k, theta)
                        .map(|g| g.sample(rng))
                        .map_err(|e| Error::InvalidSpec(e.to_string()))
                })
                .collect::<Result<_>>()?,
            AnalyticDensity::IndependentBernoulli { p } => p
                .iter()
                .map(|&pi| if rng.random::<f64>() < pi { 1.0 } else { 0.0 })
                .collect(),
        })
    }

    /// Log density (log mass for the Bernoulli case).
    pub fn log_density(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        Ok(match self {
            AnalyticDensity::IsotropicGaussian { mean, std } => {
                let d = mean.len() as f64;
                let sq: f64 = x.iter().zip(mean).map(|(a, b)| (a - b) * (a - b)).sum();
                -0.5 * sq / (std * std) - d * (std.ln() + 0.5 * (2.0 * std::f64::consts::PI).ln())
            }
            AnalyticDensity::GammaProduct { shape, scale } => x
                .iter()
                .zip(shape.iter().zip(scale))
                .map(|(&v, (&k, &theta))| gamma_log_density(v, k, theta))
                .sum(),
            AnalyticDensity::IndependentBernoulli { p } => x
                .iter()
                .zip(p)
                .map(|(&v, &pi)| {
                    if v == 1.0 {
                        pi.ln()
                    } else if v == 0.0 {
                        (1.0 - pi).ln()
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .sum(),
        })
    }
}

/// log of the Gamma(shape, scale) density at `x`; -inf outside the support.
pub fn gamma_log_density(x: f64, shape: f64, scale: f64) -> f64 {
    if x <= 0.0 {
        return if x == 0.0 && shape < 1.0 {
            f64::INFINITY
        } else if x == 0.0 && shape == 1.0 {
            -scale.ln()
        } else {
            f64::NEG_INFINITY
        };
    }
    (shape - 1.0) * x.ln() - x / scale - ln_gamma(shape) - shape * scale.ln()
}
