use std::fs;
use std::path::Path;

use crate::data::{Dataset, Label, Sample};
use crate::error::{Error, Result};

/// 1-gram representation: relative frequency of each byte value.
pub fn payload_histogram(payload: &[u8]) -> Result<Vec<f64>> {
    if payload.is_empty() {
        return Err(Error::InvalidParameter("empty payload".into()));
    }
    let mut counts = [0u64; 256];
    for &b in payload {
        counts[b as usize] += 1;
    }
    let n = payload.len() as f64;
    Ok(counts.iter().map(|&c| c as f64 / n).collect())
}

/// Reads `<hex payload>,<L|M>` lines into 256-dimensional histograms.
pub fn load_payloads(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Dataset::new(256);
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |message: String| Error::Parse {
            path: path.display().to_string(),
            line: no + 1,
            message,
        };
        let (hex_part, label) = line
            .rsplit_once(',')
            .ok_or_else(|| parse("expected `<hex>,<label>`".into()))?;
        let label = Label::from_short(label.trim())
            .ok_or_else(|| parse(format!("unknown label `{}`", label.trim())))?;
        let bytes = hex::decode(hex_part.trim()).map_err(|e| parse(format!("bad hex: {e}")))?;
        let hist = payload_histogram(&bytes).map_err(|e| parse(e.to_string()))?;
        out.push(Sample::new(hist, label))?;
    }
    Ok(out)
}
