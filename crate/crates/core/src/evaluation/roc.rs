use serde::{Deserialize, Serialize};

use crate::classifiers::Score;
use crate::data::Label;
use crate::error::{Error, Result};

/// Step ROC curve through every threshold, from (0, 0) to (1, 1).
///
/// In the default orientation the positive class is malicious: x is the
/// false positive rate (legitimate flagged), y the true positive rate. In
/// biometric orientation the positive class is legitimate (genuine): x is
/// the FAR and y the GAR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
    pub biometric: bool,
}

/// FAR needed to reach a GAR (or FP rate for a TP rate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarAtGar {
    pub far: f64,
    pub reachable: bool,
}

fn check_classes(scores: &[(Score, Label)]) -> Result<(usize, usize)> {
    let pos = scores.iter().filter(|s| s.1 == Label::Malicious).count();
    let neg = scores.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass(
            "ROC needs samples of both classes".into(),
        ));
    }
    Ok((pos, neg))
}

/// Sweeps the threshold from +inf down; samples with equal scores move
/// together, giving a diagonal segment.
fn sweep(mut keyed: Vec<(f64, bool)>, n_pos: usize, n_neg: usize) -> Vec<(f64, f64)> {
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < keyed.len() {
        let v = keyed[i].0;
        while i < keyed.len() && keyed[i].0 == v {
            if keyed[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((fp as f64 / n_neg as f64, tp as f64 / n_pos as f64));
    }
    points
}

/// ROC with malicious as the positive class.
pub fn roc(scores: &[(Score, Label)]) -> Result<RocCurve> {
    let (pos, neg) = check_classes(scores)?;
    let keyed = scores
        .iter()
        .map(|(s, l)| (s.0, *l == Label::Malicious))
        .collect();
    Ok(RocCurve {
        points: sweep(keyed, pos, neg),
        biometric: false,
    })
}

/// ROC as (FAR, GAR): genuine (legitimate) samples are accepted when their
/// score is at or below the threshold.
pub fn roc_biometric(scores: &[(Score, Label)]) -> Result<RocCurve> {
    let (imp, gen) = check_classes(scores)?;
    let keyed = scores
        .iter()
        .map(|(s, l)| (-s.0, *l == Label::Legitimate))
        .collect();
    Ok(RocCurve {
        points: sweep(keyed, gen, imp),
        biometric: true,
    })
}

/// Area under the curve for x in [0, 0.1], trapezoidal, with linear
/// interpolation inside the segment that crosses x = 0.1.
pub fn auc10(curve: &RocCurve) -> f64 {
    partial_auc(curve, 0.1)
}

pub fn partial_auc(curve: &RocCurve, limit: f64) -> f64 {
    let mut area = 0.0;
    for w in curve.points.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if x0 >= limit {
            break;
        }
        if x1 <= limit {
            area += (x1 - x0) * (y0 + y1) / 2.0;
        } else {
            let y = y0 + (y1 - y0) * (limit - x0) / (x1 - x0);
            area += (limit - x0) * (y0 + y) / 2.0;
            break;
        }
    }
    area.clamp(0.0, limit)
}

/// Smallest x at which the curve reaches y >= `gar`. Tied blocks are
/// interpolated linearly, so the answer may fall inside a diagonal segment.
pub fn far_at_gar(curve: &RocCurve, gar: f64) -> FarAtGar {
    if let Some(&(x, y)) = curve.points.first() {
        if y >= gar {
            return FarAtGar {
                far: x,
                reachable: true,
            };
        }
    }
    for w in curve.points.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if y1 >= gar {
            let far = if x1 == x0 || y1 == y0 {
                x1
            } else {
                x0 + (x1 - x0) * (gar - y0) / (y1 - y0)
            };
            return FarAtGar {
                far,
                reachable: true,
            };
        }
    }
    FarAtGar {
        far: 1.0,
        reachable: false,
    }
}

/// (FP rate, TP rate) when samples scoring strictly above `threshold` are
/// flagged malicious. In biometric terms FAR = 1 - TP rate and GAR = 1 - FP
/// rate.
pub fn rates_at_threshold(scores: &[(Score, Label)], threshold: f64) -> Result<(f64, f64)> {
    let (pos, neg) = check_classes(scores)?;
    let flagged = |label: Label| {
        scores
            .iter()
            .filter(|(s, l)| *l == label && s.0 > threshold)
            .count()
    };
    Ok((
        flagged(Label::Legitimate) as f64 / neg as f64,
        flagged(Label::Malicious) as f64 / pos as f64,
    ))
}
