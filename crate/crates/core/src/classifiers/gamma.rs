//! Maximum-likelihood Gamma fitting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scores at exactly zero are moved here before fitting or scoring.
pub const ZERO_SHIFT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    pub shape: f64,
    pub scale: f64,
}

impl GammaParams {
    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn log_density(&self, x: f64) -> f64 {
        crate::data::gamma_log_density(x, self.shape, self.scale)
    }
}

/// psi(x) for x > 0, by upward recurrence and the asymptotic series.
pub fn digamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 * inv - series
}

/// psi'(x) for x > 0.
pub fn trigamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        + inv2 / 2.0
        + inv * inv2
            * (1.0 / 6.0
                - inv2
                    * (1.0 / 30.0
                        - inv2
                            * (1.0 / 42.0
                                - inv2
                                    * (1.0 / 30.0
                                        - inv2 * (5.0 / 66.0 - inv2 * (691.0 / 2730.0 - inv2 * 7.0 / 6.0))))));
    acc + series
}

fn shifted(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|&v| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else if v == 0.0 {
                Ok(ZERO_SHIFT)
            } else {
                Err(Error::InvalidParameter(format!(
                    "gamma fitting needs non-negative finite scores, got {v}"
                )))
            }
        })
        .collect()
}

/// ML estimate of (shape, scale).
///
/// Newton iterations on `ln k - psi(k) = ln mean - mean(ln x)` start from the
/// usual closed-form approximation; the scale follows as mean / shape.
pub fn fit_gamma(values: &[f64]) -> Result<GammaParams> {
    let x = shifted(values)?;
    let distinct = x.iter().any(|&v| v != x[0]);
    if x.len() < 2 || !distinct {
        return Err(Error::DegenerateScores(
            "at least two distinct values are needed".into(),
        ));
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let mean_log = x.iter().map(|v| v.ln()).sum::<f64>() / n;
    let s = mean.ln() - mean_log;
    if !(s > 0.0) {
        return Err(Error::DegenerateScores(
            "scores are numerically constant".into(),
        ));
    }
    let mut k = (3.0 - s + ((s - 3.0).powi(2) + 24.0 * s).sqrt()) / (12.0 * s);
    for _ in 0..200 {
        let f = k.ln() - digamma(k) - s;
        let df = 1.0 / k - trigamma(k);
        let mut next = k - f / df;
        if !(next > 0.0) {
            next = k / 2.0;
        }
        let done = (next - k).abs() <= 1e-15 * k;
        k = next;
        if done {
            break;
        }
    }
    Ok(GammaParams {
        shape: k,
        scale: mean / k,
    })
}

/// d(log-likelihood)/d(shape, scale) summed over `values`.
pub fn gamma_loglik_gradient(values: &[f64], params: GammaParams) -> Result<(f64, f64)> {
    let x = shifted(values)?;
    let n = x.len() as f64;
    let sum_log: f64 = x.iter().map(|v| v.ln()).sum();
    let sum: f64 = x.iter().sum();
    let GammaParams { shape, scale } = params;
    Ok((
        sum_log - n * digamma(shape) - n * scale.ln(),
        sum / (scale * scale) - n * shape / scale,
    ))
}
