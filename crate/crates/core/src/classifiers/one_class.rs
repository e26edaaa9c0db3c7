use serde::{Deserialize, Serialize};

use super::kernel::rbf;
use super::smo::{QColumns, Solver};
use crate::data::Dataset;
use crate::error::{Error, Result};

/// One-class nu-SVM with RBF kernel. Dual coefficients sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneClassModel {
    pub support_vectors: Vec<Vec<f64>>,
    pub dual_coefficients: Vec<f64>,
    pub offset: f64,
    pub kernel_gamma: f64,
    pub nu: f64,
}

impl OneClassModel {
    pub fn dimension(&self) -> usize {
        self.support_vectors.first().map_or(0, Vec::len)
    }

    /// sum_i a_i k(sv_i, x) - rho; non-negative means inlier.
    pub fn decision_function(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coefficients)
            .map(|(sv, a)| a * rbf(sv, x, self.kernel_gamma))
            .sum::<f64>()
            - self.offset
    }
}

#[derive(Debug, Clone)]
pub struct OneClassFit {
    pub model: OneClassModel,
    /// All n dual coefficients, in training order.
    pub alpha: Vec<f64>,
    /// 1/2 a'Ka.
    pub objective: f64,
    pub violation: f64,
}

struct RbfQ<'a> {
    rows: Vec<&'a [f64]>,
    gamma: f64,
}

impl QColumns for RbfQ<'_> {
    fn len(&self) -> usize {
        self.rows.len()
    }

    fn compute_column(&self, i: usize) -> Vec<f64> {
        let xi = self.rows[i];
        self.rows.iter().map(|xk| rbf(xi, xk, self.gamma)).collect()
    }

    fn diagonal(&self, _i: usize) -> f64 {
        1.0
    }
}

pub fn train_one_class_svm(
    train: &Dataset,
    nu: f64,
    gamma: f64,
    tolerance: f64,
) -> Result<OneClassModel> {
    fit_one_class_svm(train, nu, gamma, tolerance).map(|f| f.model)
}

/// Solves `min 1/2 a'Ka  s.t. sum a = 1, 0 <= a_i <= 1/(nu n)`. Labels are ignored.
pub fn fit_one_class_svm(
    train: &Dataset,
    nu: f64,
    gamma: f64,
    tolerance: f64,
) -> Result<OneClassFit> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "nu must lie in (0, 1], got {nu}"
        )));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = train.len();
    let product = nu * n as f64;
    if product < 1.0 {
        return Err(Error::NuTooSmall { product });
    }
    let upper = 1.0 / product;
    let mut alpha = vec![0.0; n];
    let mut remaining = 1.0;
    for a in alpha.iter_mut() {
        if remaining <= 0.0 {
            break;
        }
        *a = upper.min(remaining);
        remaining -= *a;
    }

    let q = RbfQ {
        rows: train.iter().map(|s| s.features.as_slice()).collect(),
        gamma,
    };
    let mut solver = Solver::new(&q, vec![0.0; n], vec![1.0; n], vec![upper; n], alpha);
    let converged = solver.solve(tolerance);
    let out = solver.outcome(converged);
    if !out.converged {
        log::warn!(
            "one-class SVM stopped after {} iterations with violation {:e}",
            out.iterations,
            out.violation
        );
    }

    let mut support_vectors = Vec::new();
    let mut dual_coefficients = Vec::new();
    let mut free = Vec::new();
    for (a, x) in out.alpha.iter().zip(&q.rows) {
        if *a > 0.0 {
            if *a < upper {
                free.push(support_vectors.len());
            }
            support_vectors.push(x.to_vec());
            dual_coefficients.push(*a);
        }
    }
    let mut model = OneClassModel {
        support_vectors,
        dual_coefficients,
        offset: 0.0,
        kernel_gamma: gamma,
        nu,
    };
    // Free support vectors lie on the boundary at the optimum; taking the
    // smallest of their decision values keeps all of them inside it despite
    // rounding in the solver's gradient.
    model.offset = free
        .iter()
        .map(|&i| model.decision_function(&model.support_vectors[i]))
        .reduce(f64::min)
        .unwrap_or(out.rho);
    Ok(OneClassFit {
        model,
        alpha: out.alpha,
        objective: out.objective,
        violation: out.violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Label, Sample};

    #[test]
    fn single_point_model() {
        let v = vec![0.3, -1.2];
        let d = Dataset::from_samples(2, vec![Sample::new(v.clone(), Label::Legitimate)]).unwrap();
        let m = train_one_class_svm(&d, 1.0, 0.5, 1e-9).unwrap();
        let at_v = m.decision_function(&v);
        assert!(at_v >= -1e-12, "v must be an inlier, f(v) = {at_v}");
        for shifted in [[0.4, -1.2], [0.3, 0.0], [-2.0, 3.0]] {
            assert!(m.decision_function(&shifted) < at_v);
        }
    }

    #[test]
    fn nu_too_small() {
        let d = Dataset::from_samples(
            1,
            (0..5).map(|i| Sample::new(vec![i as f64], Label::Legitimate)).collect(),
        )
        .unwrap();
        assert!(matches!(
            train_one_class_svm(&d, 0.1, 1.0, 1e-6),
            Err(Error::NuTooSmall { .. })
        ));
    }

    #[test]
    fn coefficients_are_normalised_and_bounded() {
        let d = Dataset::from_samples(
            1,
            (0..40)
                .map(|i| Sample::new(vec![(i as f64 * 0.37).sin() * 3.0], Label::Legitimate))
                .collect(),
        )
        .unwrap();
        let fit = fit_one_class_svm(&d, 0.2, 0.7, 1e-10).unwrap();
        let sum: f64 = fit.alpha.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        let ub = 1.0 / (0.2 * 40.0);
        assert!(fit.alpha.iter().all(|&a| (0.0..=ub + 1e-15).contains(&a)));
    }
}
