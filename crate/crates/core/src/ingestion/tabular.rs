use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label, Sample};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TabularFormat {
    /// Header `f0,...,f{d-1},label`, one sample per line.
    #[default]
    Dense,
    /// `<d> <idx>:<val> ...,<label>` with 0-based indices.
    Sparse,
}

fn perr(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn parse_label(path: &Path, line: usize, s: &str) -> Result<Label> {
    Label::from_short(s.trim())
        .ok_or_else(|| perr(path, line, format!("unknown label `{}`", s.trim())))
}

fn parse_value(path: &Path, line: usize, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| perr(path, line, format!("bad value `{}`", s.trim())))
}

/// Reads a dense or sparse file; the format is recognised from the first
/// non-empty line (dense files start with the `f0` header).
pub fn load_tabular(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let first = text.lines().find(|l| !l.trim().is_empty());
    match first {
        None => Err(perr(path, 1, "empty file")),
        Some(l) if l.trim_start().starts_with("f0") || l.trim() == "label" => {
            parse_dense(path, &text)
        }
        Some(_) => parse_sparse(path, &text),
    }
}

fn parse_dense(path: &Path, text: &str) -> Result<Dataset> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hno, header) = lines.next().ok_or_else(|| perr(path, 1, "empty file"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let d = cols.len() - 1;
    let expected: Vec<String> = (0..d).map(|i| format!("f{i}")).chain(["label".into()]).collect();
    if cols != expected {
        return Err(perr(path, hno + 1, "header must be f0,...,f{d-1},label"));
    }
    let mut out = Dataset::new(d);
    for (no, line) in lines {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != d + 1 {
            return Err(perr(
                path,
                no + 1,
                format!("expected {} fields, found {}", d + 1, f.len()),
            ));
        }
        let x = f[..d]
            .iter()
            .map(|v| parse_value(path, no + 1, v))
            .collect::<Result<Vec<_>>>()?;
        out.push(Sample::new(x, parse_label(path, no + 1, f[d])?))?;
    }
    Ok(out)
}

fn parse_sparse(path: &Path, text: &str) -> Result<Dataset> {
    let mut out: Option<Dataset> = None;
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let ln = no + 1;
        let (body, label) = line
            .rsplit_once(',')
            .ok_or_else(|| perr(path, ln, "missing `,<label>`"))?;
        let label = parse_label(path, ln, label)?;
        let mut parts = body.split_whitespace();
        let d: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| perr(path, ln, "missing dimension"))?;
        let data = out.get_or_insert_with(|| Dataset::new(d));
        if d != data.dimension() {
            return Err(perr(
                path,
                ln,
                format!("dimension {d} differs from {}", data.dimension()),
            ));
        }
        let mut x = vec![0.0; d];
        for entry in parts {
            let (i, v) = entry
                .split_once(':')
                .ok_or_else(|| perr(path, ln, format!("bad entry `{entry}`")))?;
            let i: usize = i
                .parse()
                .map_err(|_| perr(path, ln, format!("bad index `{i}`")))?;
            if i >= d {
                return Err(perr(path, ln, format!("index {i} out of range for dimension {d}")));
            }
            x[i] = parse_value(path, ln, v)?;
        }
        data.push(Sample::new(x, label))?;
    }
    out.ok_or_else(|| perr(path, 1, "empty file"))
}

pub fn format_tabular(data: &Dataset, format: TabularFormat) -> String {
    let mut out = String::new();
    match format {
        TabularFormat::Dense => {
            for i in 0..data.dimension() {
                let _ = write!(out, "f{i},");
            }
            out.push_str("label\n");
            for s in data {
                for v in &s.features {
                    let _ = write!(out, "{v},");
                }
                out.push_str(s.label.short());
                out.push('\n');
            }
        }
        TabularFormat::Sparse => {
            for s in data {
                let _ = write!(out, "{}", data.dimension());
                for (i, v) in s.features.iter().enumerate() {
                    if *v != 0.0 {
                        let _ = write!(out, " {i}:{v}");
                    }
                }
                let _ = writeln!(out, ",{}", s.label.short());
            }
        }
    }
    out
}

pub fn write_tabular(data: &Dataset, path: &Path, format: TabularFormat) -> Result<()> {
    fs::write(path, format_tabular(data, format)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn load_str(text: &str) -> Result<Dataset> {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        fs::write(&p, text).unwrap();
        load_tabular(&p)
    }

    #[test]
    fn dense_two_rows_in_order() {
        let d = load_str("f0,f1,label\n0.5,1,L\n2,-3,M\n").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.samples()[0].features, vec![0.5, 1.0]);
        assert_eq!(d.samples()[1].label, Label::Malicious);
    }

    #[test]
    fn sparse_row() {
        let d = load_str("8 1:1 7:1,M\n").unwrap();
        assert_eq!(d.dimension(), 8);
        let x = &d.samples()[0].features;
        assert_eq!(x[1], 1.0);
        assert_eq!(x[7], 1.0);
        assert_eq!(x.iter().sum::<f64>(), 2.0);
    }

    #[test]
    fn sparse_index_beyond_dimension_is_an_error() {
        assert!(matches!(
            load_str("3 1:1 7:1,M\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn ragged_and_unknown_label_name_the_line() {
        assert!(matches!(
            load_str("f0,f1,label\n1,2,L\n1,M\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            load_str("f0,label\n1,L\n1,X\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    proptest! {
        #[test]
        fn write_then_read_is_identity(
            rows in proptest::collection::vec(
                (proptest::collection::vec(-1e6f64..1e6, 3), any::<bool>()), 1..20),
            sparse in any::<bool>(),
        ) {
            let data = Dataset::from_samples(3, rows.iter().map(|(x, m)| Sample::new(
                x.clone(), if *m { Label::Malicious } else { Label::Legitimate })).collect()).unwrap();
            let fmt = if sparse { TabularFormat::Sparse } else { TabularFormat::Dense };
            let back = load_str(&format_tabular(&data, fmt)).unwrap();
            prop_assert_eq!(back, data);
        }
    }
}
