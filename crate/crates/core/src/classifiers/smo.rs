//! Sequential minimal optimisation for box- and equality-constrained
//! quadratic programs of the form
//!
//! ```text
//!   min  1/2 a'Qa + p'a   s.t.  y'a = const,  0 <= a_i <= upper_i
//! ```
//!
//! with `y_i` in {+1, -1}. Working pairs are picked with second-order
//! information (maximal gain among violating pairs). Used by both the
//! soft-margin linear SVM and the one-class nu-SVM.

use std::collections::HashMap;
use std::sync::Arc;

const TAU: f64 = 1e-12;
const FULL_MATRIX_LIMIT: usize = 2500;
const CACHE_BYTES: usize = 64 << 20;

/// Column access to the (symmetric) matrix Q.
pub trait QColumns {
    fn len(&self) -> usize;
    fn compute_column(&self, i: usize) -> Vec<f64>;
    fn diagonal(&self, i: usize) -> f64;
}

/// Holds Q in full for small problems, otherwise a bounded column cache.
struct ColumnStore<'a, Q: QColumns> {
    q: &'a Q,
    full: Option<Vec<Arc<Vec<f64>>>>,
    cache: HashMap<usize, Arc<Vec<f64>>>,
    order: Vec<usize>,
    capacity: usize,
}

impl<'a, Q: QColumns> ColumnStore<'a, Q> {
    fn new(q: &'a Q) -> Self {
        let n = q.len();
        let full = (n <= FULL_MATRIX_LIMIT)
            .then(|| (0..n).map(|i| Arc::new(q.compute_column(i))).collect());
        let capacity = (CACHE_BYTES / (8 * n.max(1))).max(2);
        Self {
            q,
            full,
            cache: HashMap::new(),
            order: Vec::new(),
            capacity,
        }
    }

    fn column(&mut self, i: usize) -> Arc<Vec<f64>> {
        if let Some(full) = &self.full {
            return full[i].clone();
        }
        if let Some(c) = self.cache.get(&i) {
            return c.clone();
        }
        if self.order.len() >= self.capacity {
            let evict = self.order.remove(0);
            self.cache.remove(&evict);
        }
        let c = Arc::new(self.q.compute_column(i));
        self.cache.insert(i, c.clone());
        self.order.push(i);
        c
    }
}

#[derive(Debug, Clone)]
pub struct SolverOutcome {
    pub alpha: Vec<f64>,
    /// Offset such that the decision value is `sum_i y_i a_i K_i(x) - rho`.
    pub rho: f64,
    /// Value of 1/2 a'Qa + p'a.
    pub objective: f64,
    /// Maximal violating-pair gap m(a) - M(a) at termination.
    pub violation: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub struct Solver<'a, Q: QColumns> {
    store: ColumnStore<'a, Q>,
    p: Vec<f64>,
    y: Vec<f64>,
    upper: Vec<f64>,
    alpha: Vec<f64>,
    gradient: Vec<f64>,
    diag: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
}

impl<'a, Q: QColumns> Solver<'a, Q> {
    /// `alpha` must be feasible for the box and carry the intended value of `y'a`.
    pub fn new(q: &'a Q, p: Vec<f64>, y: Vec<f64>, upper: Vec<f64>, alpha: Vec<f64>) -> Self {
        let n = q.len();
        assert_eq!(p.len(), n);
        assert_eq!(y.len(), n);
        assert_eq!(upper.len(), n);
        assert_eq!(alpha.len(), n);
        let mut store = ColumnStore::new(q);
        let mut gradient = p.clone();
        for i in 0..n {
            if alpha[i] != 0.0 {
                let col = store.column(i);
                for (g, qk) in gradient.iter_mut().zip(col.iter()) {
                    *g += alpha[i] * qk;
                }
            }
        }
        let diag = (0..n).map(|i| q.diagonal(i)).collect();
        Self {
            store,
            p,
            y,
            upper,
            alpha,
            gradient,
            diag,
            iterations: 0,
            max_iterations: (100 * n).max(10_000_000),
        }
    }

    fn in_up(&self, t: usize) -> bool {
        if self.y[t] > 0.0 {
            self.alpha[t] < self.upper[t]
        } else {
            self.alpha[t] > 0.0
        }
    }

    fn in_low(&self, t: usize) -> bool {
        if self.y[t] > 0.0 {
            self.alpha[t] > 0.0
        } else {
            self.alpha[t] < self.upper[t]
        }
    }

    /// Current m(a) - M(a).
    pub fn violation(&self) -> f64 {
        let mut gmax = f64::NEG_INFINITY;
        let mut gmin = f64::INFINITY;
        for t in 0..self.alpha.len() {
            let v = -self.y[t] * self.gradient[t];
            if self.in_up(t) {
                gmax = gmax.max(v);
            }
            if self.in_low(t) {
                gmin = gmin.min(v);
            }
        }
        if gmax.is_finite() && gmin.is_finite() {
            (gmax - gmin).max(0.0)
        } else {
            0.0
        }
    }

    fn select_pair(&mut self, eps: f64) -> Option<(usize, usize)> {
        let n = self.alpha.len();
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            if self.in_up(t) {
                let v = -self.y[t] * self.gradient[t];
                if v > gmax {
                    gmax = v;
                    i_sel = Some(t);
                }
            }
        }
        let i = i_sel?;
        let qi = self.store.column(i);
        let mut gmax2 = f64::NEG_INFINITY;
        let mut best = f64::INFINITY;
        let mut j_sel = None;
        for t in 0..n {
            if !self.in_low(t) {
                continue;
            }
            let yg = self.y[t] * self.gradient[t];
            gmax2 = gmax2.max(yg);
            let b = gmax + yg;
            if b > 0.0 {
                // Q here is the signed matrix, so y_i y_t Q_it recovers K_it.
                let a = self.diag[i] + self.diag[t] - 2.0 * self.y[i] * self.y[t] * qi[t];
                let a = if a > 0.0 { a } else { TAU };
                let gain = -(b * b) / a;
                if gain <= best {
                    best = gain;
                    j_sel = Some(t);
                }
            }
        }
        if gmax + gmax2 < eps {
            return None;
        }
        j_sel.map(|j| (i, j))
    }

    fn update_pair(&mut self, i: usize, j: usize) {
        let qi = self.store.column(i);
        let qj = self.store.column(j);
        let (ci, cj) = (self.upper[i], self.upper[j]);
        let old_i = self.alpha[i];
        let old_j = self.alpha[j];
        let (mut ai, mut aj) = (old_i, old_j);
        let (gi, gj) = (self.gradient[i], self.gradient[j]);

        if self.y[i] != self.y[j] {
            let mut quad = self.diag[i] + self.diag[j] + 2.0 * qi[j];
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-gi - gj) / quad;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > ci - cj {
                if ai > ci {
                    ai = ci;
                    aj = ci - diff;
                }
            } else if aj > cj {
                aj = cj;
                ai = cj + diff;
            }
        } else {
            let mut quad = self.diag[i] + self.diag[j] - 2.0 * qi[j];
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (gi - gj) / quad;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > ci {
                if ai > ci {
                    ai = ci;
                    aj = sum - ci;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > cj {
                if aj > cj {
                    aj = cj;
                    ai = sum - cj;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }

        self.alpha[i] = ai;
        self.alpha[j] = aj;
        let di = ai - old_i;
        let dj = aj - old_j;
        for ((g, a), b) in self.gradient.iter_mut().zip(qi.iter()).zip(qj.iter()) {
            *g += a * di + b * dj;
        }
    }

    /// Iterates until the maximal violating-pair gap drops below `eps`.
    pub fn solve(&mut self, eps: f64) -> bool {
        while self.iterations < self.max_iterations {
            match self.select_pair(eps) {
                None => return true,
                Some((i, j)) => self.update_pair(i, j),
            }
            self.iterations += 1;
        }
        log::warn!(
            "SMO stopped after {} iterations without reaching eps={eps}",
            self.iterations
        );
        false
    }

    fn rho(&self) -> f64 {
        let mut ub = f64::INFINITY;
        let mut lb = f64::NEG_INFINITY;
        let mut sum_free = 0.0;
        let mut n_free = 0usize;
        for t in 0..self.alpha.len() {
            let yg = self.y[t] * self.gradient[t];
            if self.alpha[t] >= self.upper[t] {
                if self.y[t] < 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else if self.alpha[t] <= 0.0 {
                if self.y[t] > 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else {
                n_free += 1;
                sum_free += yg;
            }
        }
        if n_free > 0 {
            sum_free / n_free as f64
        } else if ub.is_finite() && lb.is_finite() {
            (ub + lb) / 2.0
        } else if ub.is_finite() {
            ub
        } else if lb.is_finite() {
            lb
        } else {
            0.0
        }
    }

    pub fn outcome(&self, converged: bool) -> SolverOutcome {
        let objective = self
            .alpha
            .iter()
            .zip(self.gradient.iter().zip(&self.p))
            .map(|(a, (g, p))| a * (g + p))
            .sum::<f64>()
            / 2.0;
        SolverOutcome {
            alpha: self.alpha.clone(),
            rho: self.rho(),
            objective,
            violation: self.violation(),
            iterations: self.iterations,
            converged,
        }
    }
}
