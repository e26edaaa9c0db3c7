//! Synthetic stand-ins for the three case-study corpora.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label, Sample};
use crate::error::{Error, Result};
use crate::rng::{bernoulli, child_seed, rng_from_seed};

/// Binary bag-of-words emails. A third of the terms are spam-indicative, a
/// third ham-indicative, the rest neutral; spam and ham alternate.
pub fn spam_bag_of_words(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = rng_from_seed(seed);
    let third = d / 3;
    let mut out = Dataset::new(d);
    for i in 0..n {
        let label = if i % 2 == 0 {
            Label::Malicious
        } else {
            Label::Legitimate
        };
        let x = (0..d)
            .map(|j| {
                let p = match (j < third, j < 2 * third, label) {
                    (true, _, Label::Malicious) => 0.25,
                    (true, _, Label::Legitimate) => 0.05,
                    (false, true, Label::Malicious) => 0.05,
                    (false, true, Label::Legitimate) => 0.25,
                    _ => 0.1,
                };
                if bernoulli(&mut rng, p) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let _ = out.push(Sample::new(x, label));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OneClassTask {
    pub n_train: usize,
    pub n_test_legitimate: usize,
    pub n_test_malicious: usize,
    /// Centre of the malicious cluster (both coordinates).
    pub malicious_center: f64,
    pub malicious_spread: f64,
}

impl Default for OneClassTask {
    fn default() -> Self {
        Self {
            n_train: 400,
            n_test_legitimate: 400,
            n_test_malicious: 50,
            malicious_center: 3.0,
            malicious_spread: 0.3,
        }
    }
}

fn gaussian_point(rng: &mut impl Rng, center: f64, spread: f64) -> Vec<f64> {
    let n = Normal::new(center, spread).expect("valid normal");
    vec![n.sample(rng), n.sample(rng)]
}

/// 2-D anomaly-detection task: legitimate traffic is N(0, I), intrusions a
/// tight cluster away from it. Training data is legitimate only; the
/// testing set holds fresh legitimate points followed by the intrusions.
pub fn one_class_task(task: &OneClassTask, seed: u64) -> (Dataset, Dataset) {
    let mut rng = rng_from_seed(seed);
    let mut train = Dataset::new(2);
    for _ in 0..task.n_train {
        let _ = train.push(Sample::new(gaussian_point(&mut rng, 0.0, 1.0), Label::Legitimate));
    }
    let mut test = Dataset::new(2);
    for _ in 0..task.n_test_legitimate {
        let _ = test.push(Sample::new(gaussian_point(&mut rng, 0.0, 1.0), Label::Legitimate));
    }
    for _ in 0..task.n_test_malicious {
        let _ = test.push(Sample::new(
            gaussian_point(&mut rng, task.malicious_center, task.malicious_spread),
            Label::Malicious,
        ));
    }
    (train, test)
}

/// (shape, scale) of the fingerprint and face score distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreModel {
    pub genuine: [(f64, f64); 2],
    pub impostor: [(f64, f64); 2],
}

impl Default for ScoreModel {
    /// Genuine scores have larger shape and scale in both matchers, so the
    /// likelihood ratio grows with each score.
    fn default() -> Self {
        Self {
            genuine: [(6.0, 0.08), (8.0, 0.06)],
            impostor: [(2.0, 0.04), (3.0, 0.05)],
        }
    }
}

/// Gamma-distributed (fingerprint, face) score pairs; genuine first.
pub fn biometric_scores(
    model: &ScoreModel,
    n_genuine: usize,
    n_impostor: usize,
    seed: u64,
) -> Result<Dataset> {
    let mut rng = rng_from_seed(seed);
    let dists = |params: &[(f64, f64); 2]| -> Result<Vec<Gamma<f64>>> {
        params
            .iter()
            .map(|&(k, s)| {
                Gamma::new(k, s).map_err(|e| Error::InvalidParameter(format!("gamma({k}, {s}): {e}")))
            })
            .collect()
    };
    let gen = dists(&model.genuine)?;
    let imp = dists(&model.impostor)?;
    let mut out = Dataset::new(2);
    for (dist, count, label) in [
        (&gen, n_genuine, Label::Legitimate),
        (&imp, n_impostor, Label::Malicious),
    ] {
        for _ in 0..count {
            out.push(Sample::new(
                dist.iter().map(|g| g.sample(&mut rng)).collect(),
                label,
            ))?;
        }
    }
    Ok(out)
}

/// Email-like documents for exercising the text pipeline: spam draws words
/// from a spam lexicon, ham from a ham lexicon, both share filler.
pub fn email_corpus(n: usize, seed: u64) -> Vec<(Label, String)> {
    const SPAM: &[&str] = &[
        "free", "winner", "viagra", "cash", "offer", "click", "prize", "cheap", "bonus", "credit",
    ];
    const HAM: &[&str] = &[
        "meeting", "report", "project", "lunch", "schedule", "review", "draft", "team", "thanks",
        "agenda",
    ];
    const FILLER: &[&str] = &["the", "and", "you", "for", "this", "with", "today", "please"];
    let mut rng = rng_from_seed(child_seed(seed, 3));
    (0..n)
        .map(|i| {
            let label = if i % 2 == 0 {
                Label::Malicious
            } else {
                Label::Legitimate
            };
            let own = if label == Label::Malicious { SPAM } else { HAM };
            let other = if label == Label::Malicious { HAM } else { SPAM };
            let words: Vec<&str> = (0..12)
                .map(|_| {
                    let r: f64 = rng.random();
                    let list = if r < 0.5 {
                        own
                    } else if r < 0.6 {
                        other
                    } else {
                        FILLER
                    };
                    list[rng.random_range(0..list.len())]
                })
                .collect();
            (label, words.join(" "))
        })
        .collect()
}
