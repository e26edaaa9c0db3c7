use super::kernel::dot;
use super::smo::{QColumns, Solver};
use super::LinearModel;
use crate::data::Dataset;
use crate::error::{Error, Result};

struct LinearQ<'a> {
    rows: Vec<&'a [f64]>,
    y: Vec<f64>,
}

impl QColumns for LinearQ<'_> {
    fn len(&self) -> usize {
        self.rows.len()
    }

    fn compute_column(&self, i: usize) -> Vec<f64> {
        let xi = self.rows[i];
        let yi = self.y[i];
        self.rows
            .iter()
            .zip(&self.y)
            .map(|(xk, yk)| yi * yk * dot(xi, xk))
            .collect()
    }

    fn diagonal(&self, i: usize) -> f64 {
        dot(self.rows[i], self.rows[i])
    }
}

/// Soft-margin linear SVM solution with its optimality certificate.
#[derive(Debug, Clone)]
pub struct LinearSvmFit {
    pub model: LinearModel,
    pub alpha: Vec<f64>,
    /// 1/2 |w|^2 + C sum hinge.
    pub primal: f64,
    /// sum a - 1/2 |w|^2.
    pub dual: f64,
    /// Maximal violating-pair gap of the dual at termination.
    pub violation: f64,
    pub iterations: usize,
}

impl LinearSvmFit {
    pub fn duality_gap(&self) -> f64 {
        self.primal - self.dual
    }
}

pub fn train_linear_svm(train: &Dataset, c_param: f64, tolerance: f64) -> Result<LinearModel> {
    fit_linear_svm(train, c_param, tolerance).map(|f| f.model)
}

/// Solves the dual by SMO and tightens the working tolerance until the
/// duality gap is at most `tolerance * (1 + |primal|)`.
pub fn fit_linear_svm(train: &Dataset, c_param: f64, tolerance: f64) -> Result<LinearSvmFit> {
    if !(c_param.is_finite() && c_param > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "C must be positive, got {c_param}"
        )));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    if !train.has_both_classes() {
        return Err(Error::DegenerateTrainingSet(
            "linear SVM needs both classes".into(),
        ));
    }
    let n = train.len();
    let d = train.dimension();
    let q = LinearQ {
        rows: train.iter().map(|s| s.features.as_slice()).collect(),
        y: train.iter().map(|s| s.label.sign()).collect(),
    };
    let mut solver = Solver::new(
        &q,
        vec![-1.0; n],
        q.y.clone(),
        vec![c_param; n],
        vec![0.0; n],
    );

    let mut eps = tolerance.min(1e-3);
    loop {
        let converged = solver.solve(eps);
        let out = solver.outcome(converged);
        let mut w = vec![0.0; d];
        for ((a, y), x) in out.alpha.iter().zip(&q.y).zip(&q.rows) {
            if *a != 0.0 {
                for (wk, xk) in w.iter_mut().zip(x.iter()) {
                    *wk += a * y * xk;
                }
            }
        }
        let bias = -out.rho;
        let half_norm = 0.5 * dot(&w, &w);
        let hinge: f64 = q
            .rows
            .iter()
            .zip(&q.y)
            .map(|(x, y)| (1.0 - y * (dot(&w, x) + bias)).max(0.0))
            .sum();
        let primal = half_norm + c_param * hinge;
        let dual = out.alpha.iter().sum::<f64>() - half_norm;
        let gap = primal - dual;
        if gap <= tolerance * (1.0 + primal.abs()) || eps <= 1e-14 || !converged {
            if gap > tolerance * (1.0 + primal.abs()) {
                log::warn!("linear SVM duality gap {gap:e} above requested tolerance");
            }
            return Ok(LinearSvmFit {
                model: LinearModel::new(w, bias),
                alpha: out.alpha,
                primal,
                dual,
                violation: out.violation,
                iterations: out.iterations,
            });
        }
        eps /= 10.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Label, Sample};

    fn set(points: &[(&[f64], Label)]) -> Dataset {
        Dataset::from_samples(
            points[0].0.len(),
            points
                .iter()
                .map(|(x, l)| Sample::new(x.to_vec(), *l))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn symmetric_two_point_problem() {
        let d = set(&[
            (&[0.0, 0.0], Label::Legitimate),
            (&[2.0, 0.0], Label::Malicious),
        ]);
        let fit = fit_linear_svm(&d, 1e6, 1e-10).unwrap();
        let m = &fit.model;
        assert!((m.weights[0] - 1.0).abs() < 1e-8);
        assert!(m.weights[1].abs() < 1e-12);
        assert!((m.bias + 1.0).abs() < 1e-8);
        // boundary at x1 = 1
        assert!(m.discriminant(&[1.0, 5.0]).abs() < 1e-8);
        assert!(m.discriminant(&[0.0, 0.0]) < 0.0);
        assert!(m.discriminant(&[2.0, 0.0]) > 0.0);
    }

    #[test]
    fn xor_is_tolerated() {
        let d = set(&[
            (&[0.0, 0.0], Label::Legitimate),
            (&[1.0, 1.0], Label::Legitimate),
            (&[0.0, 1.0], Label::Malicious),
            (&[1.0, 0.0], Label::Malicious),
        ]);
        let fit = fit_linear_svm(&d, 1.0, 1e-8).unwrap();
        let errors = d
            .iter()
            .filter(|s| (fit.model.discriminant(&s.features) >= 0.0) != (s.label == Label::Malicious))
            .count();
        assert!(errors > 0);
        assert!(fit.duality_gap() <= 1e-8 * (1.0 + fit.primal.abs()));
    }

    #[test]
    fn single_class_is_rejected() {
        let d = set(&[(&[0.0], Label::Legitimate), (&[1.0], Label::Legitimate)]);
        assert!(matches!(
            train_linear_svm(&d, 1.0, 1e-6),
            Err(Error::DegenerateTrainingSet(_))
        ));
    }
}
