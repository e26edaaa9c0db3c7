#![allow(dead_code)]

use clfsec::data::{Dataset, Label, Sample};
use clfsec::rng::rng_from_seed;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Box- and equality-constrained convex QP
/// `min 1/2 a'Qa + p'a  s.t.  sum_i s_i a_i = b,  0 <= a_i <= u`
/// with every s_i in {-1, +1}.
pub struct Qp {
    pub q: Vec<Vec<f64>>,
    pub p: Vec<f64>,
    pub s: Vec<f64>,
    pub b: f64,
    pub u: f64,
}

impl Qp {
    pub fn objective(&self, a: &[f64]) -> f64 {
        let n = a.len();
        let mut v = 0.0;
        for i in 0..n {
            let qa: f64 = (0..n).map(|j| self.q[i][j] * a[j]).sum();
            v += 0.5 * a[i] * qa + self.p[i] * a[i];
        }
        v
    }

    fn gradient(&self, a: &[f64]) -> Vec<f64> {
        let n = a.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.q[i][j] * a[j]).sum::<f64>() + self.p[i])
            .collect()
    }

    /// Euclidean projection onto the feasible set: a_i = clip(v_i - lambda s_i),
    /// with lambda found by bisection on the (monotone) equality residual.
    fn project(&self, v: &[f64]) -> Vec<f64> {
        let at = |lam: f64| -> Vec<f64> {
            v.iter()
                .zip(&self.s)
                .map(|(vi, si)| (vi - lam * si).clamp(0.0, self.u))
                .collect()
        };
        let resid = |a: &[f64]| a.iter().zip(&self.s).map(|(x, s)| x * s).sum::<f64>() - self.b;
        let span = v.iter().fold(0.0f64, |m, x| m.max(x.abs())) + self.u + 1.0;
        let (mut lo, mut hi) = (-span, span);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if resid(&at(mid)) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-16 * span {
                break;
            }
        }
        at(0.5 * (lo + hi))
    }

    fn lipschitz(&self) -> f64 {
        let n = self.p.len();
        let mut v = vec![1.0; n];
        let mut lam = 0.0;
        for _ in 0..500 {
            let w: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| self.q[i][j] * v[j]).sum())
                .collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 1.0;
            }
            lam = norm;
            v = w.iter().map(|x| x / norm).collect();
        }
        lam * 1.01
    }

    /// Accelerated projected gradient with function-value restarts.
    pub fn solve(&self, iterations: usize) -> (Vec<f64>, f64) {
        let n = self.p.len();
        let step = 1.0 / self.lipschitz();
        let mut x = self.project(&vec![0.0; n]);
        let mut y = x.clone();
        let mut t = 1.0f64;
        let mut fx = self.objective(&x);
        for _ in 0..iterations {
            let g = self.gradient(&y);
            let v: Vec<f64> = y.iter().zip(&g).map(|(yi, gi)| yi - step * gi).collect();
            let xn = self.project(&v);
            let fxn = self.objective(&xn);
            if fxn > fx {
                t = 1.0;
                y = x.clone();
                continue;
            }
            let tn = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
            y = xn
                .iter()
                .zip(&x)
                .map(|(a, b)| a + (t - 1.0) / tn * (a - b))
                .collect();
            x = xn;
            fx = fxn;
            t = tn;
        }
        (x, fx)
    }
}

pub fn random_labelled(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = rng_from_seed(seed);
    let mut out = Dataset::new(d);
    for i in 0..n {
        let label = if i % 2 == 0 {
            Label::Legitimate
        } else {
            Label::Malicious
        };
        let shift = if label == Label::Malicious { 0.7 } else { -0.7 };
        let x: Vec<f64> = (0..d)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                z + shift
            })
            .collect();
        out.push(Sample::new(x, label)).unwrap();
    }
    out
}

pub fn random_points(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = rng_from_seed(seed);
    let mut out = Dataset::new(d);
    for _ in 0..n {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        out.push(Sample::new(x, Label::Legitimate)).unwrap();
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dual of the soft-margin linear SVM in minimisation form.
pub fn svm_dual_qp(data: &Dataset, c: f64) -> Qp {
    let xs: Vec<&[f64]> = data.iter().map(|s| s.features.as_slice()).collect();
    let ys: Vec<f64> = data.iter().map(|s| s.label.sign()).collect();
    let n = xs.len();
    Qp {
        q: (0..n)
            .map(|i| (0..n).map(|j| ys[i] * ys[j] * dot(xs[i], xs[j])).collect())
            .collect(),
        p: vec![-1.0; n],
        s: ys,
        b: 0.0,
        u: c,
    }
}

/// Dual of the one-class nu-SVM with RBF kernel.
pub fn one_class_dual_qp(data: &Dataset, nu: f64, gamma: f64) -> Qp {
    let xs: Vec<&[f64]> = data.iter().map(|s| s.features.as_slice()).collect();
    let n = xs.len();
    let k = |a: &[f64], b: &[f64]| {
        let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        (-gamma * d2).exp()
    };
    Qp {
        q: (0..n)
            .map(|i| (0..n).map(|j| k(xs[i], xs[j])).collect())
            .collect(),
        p: vec![0.0; n],
        s: vec![1.0; n],
        b: 1.0,
        u: 1.0 / (nu * n as f64),
    }
}

/// min of w'x + b over the Hamming ball of `radius` around binary x.
pub fn hamming_ball_min(w: &[f64], b: f64, x: &[f64], radius: usize) -> f64 {
    let d = x.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1u32 << d) {
        if mask.count_ones() as usize > radius {
            continue;
        }
        let xp: Vec<f64> = (0..d)
            .map(|i| if mask >> i & 1 == 1 { 1.0 - x[i] } else { x[i] })
            .collect();
        best = best.min(dot(w, &xp) + b);
    }
    best
}
