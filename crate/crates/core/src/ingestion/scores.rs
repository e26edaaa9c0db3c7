use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label, Sample};
use crate::error::{Error, Result};

/// Per-matcher min-max bounds; values outside are clipped to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMax {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl MinMax {
    pub fn fit(rows: &[[f64; 2]]) -> Result<Self> {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for r in rows {
            for j in 0..2 {
                min[j] = min[j].min(r[j]);
                max[j] = max[j].max(r[j]);
            }
        }
        for (j, name) in ["fingerprint", "face"].iter().enumerate() {
            if !(max[j] > min[j]) {
                return Err(Error::DegenerateScores(format!(
                    "{name} scores are constant"
                )));
            }
        }
        Ok(Self { min, max })
    }

    pub fn apply(&self, x: [f64; 2]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for j in 0..2 {
            out[j] = ((x[j] - self.min[j]) / (self.max[j] - self.min[j])).clamp(0.0, 1.0);
        }
        out
    }
}

/// One verification attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord {
    pub user_id: String,
    pub claimed_id: String,
    pub scores: [f64; 2],
    pub label: Label,
}

#[derive(Debug, Clone)]
pub struct ScoreTable {
    pub records: Vec<ScoreRecord>,
    pub normalizer: MinMax,
    /// Normalised (fingerprint, face) pairs; genuine = L, impostor = M.
    pub dataset: Dataset,
}

fn parse_label(s: &str) -> Option<Label> {
    match s.to_ascii_lowercase().as_str() {
        "genuine" | "l" => Some(Label::Legitimate),
        "impostor" | "m" => Some(Label::Malicious),
        _ => None,
    }
}

/// Reads `user_id,claimed_id,fing_score,face_score,label` rows (header
/// optional) and min-max normalises each matcher over the whole file.
pub fn load_scores(path: &Path) -> Result<ScoreTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (no == 0 && line.starts_with("user_id")) {
            continue;
        }
        let parse = |message: String| Error::Parse {
            path: path.display().to_string(),
            line: no + 1,
            message,
        };
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(parse(format!("expected 5 fields, found {}", f.len())));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse(format!("bad score `{s}`")))
        };
        records.push(ScoreRecord {
            user_id: f[0].to_owned(),
            claimed_id: f[1].to_owned(),
            scores: [num(f[2])?, num(f[3])?],
            label: parse_label(f[4]).ok_or_else(|| parse(format!("unknown label `{}`", f[4])))?,
        });
    }
    let raw: Vec<[f64; 2]> = records.iter().map(|r| r.scores).collect();
    let normalizer = MinMax::fit(&raw)?;
    let dataset = Dataset::from_samples(
        2,
        records
            .iter()
            .map(|r| Sample::new(normalizer.apply(r.scores).to_vec(), r.label))
            .collect(),
    )?;
    Ok(ScoreTable {
        records,
        normalizer,
        dataset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_max_definition() {
        let m = MinMax::fit(&[[2.0, 1.0], [4.0, 3.0], [6.0, 5.0]]).unwrap();
        assert_eq!(m.apply([2.0, 1.0]), [0.0, 0.0]);
        assert_eq!(m.apply([4.0, 3.0]), [0.5, 0.5]);
        assert_eq!(m.apply([6.0, 5.0]), [1.0, 1.0]);
        assert_eq!(m.apply([7.0, 0.0]), [1.0, 0.0]);
    }

    #[test]
    fn single_row_is_degenerate() {
        assert!(matches!(MinMax::fit(&[[1.0, 2.0]]), Err(Error::DegenerateScores(_))));
    }

    #[test]
    fn normalising_unit_bounds_is_identity() {
        let m = MinMax {
            min: [0.0, 0.0],
            max: [1.0, 1.0],
        };
        for x in [[0.0, 1.0], [0.25, 0.75], [0.1, 0.3]] {
            assert_eq!(m.apply(x), x);
        }
    }

    #[test]
    fn score_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        fs::write(
            &p,
            "user_id,claimed_id,fing_score,face_score,label\n\
             1,1,10,0.9,genuine\n2,1,2,0.1,impostor\n1,2,6,0.5,impostor\n",
        )
        .unwrap();
        let t = load_scores(&p).unwrap();
        assert_eq!(t.dataset.len(), 3);
        assert_eq!(t.dataset.samples()[0].features, vec![1.0, 1.0]);
        assert_eq!(t.dataset.samples()[2].features, vec![0.5, 0.5]);
        assert_eq!(t.dataset.count(Label::Malicious), 2);
    }
}
