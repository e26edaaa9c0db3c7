//! The four steps behind the command-line tool: prepare datasets, evaluate
//! security curves, merge reports into figure data, validate configs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{DataSource, OutputFormat, ScenarioConfig};
use crate::data::{resample, Dataset, FoldSet, ResampleMethod, Sample};
use crate::error::{Error, Result};
use crate::evaluation::{
    security_sweep, EvaluationReport, Metric, SweepOptions, REPORT_VERSION,
};
use crate::ingestion::{
    information_gain_select, load_payloads, load_scores, load_tabular, tokenize_emails,
    vectorize_corpus, write_tabular, EmailCorpus, MinMax, TabularFormat, Vocabulary,
};
use crate::rng::{derive_seed, Stream};
use crate::synthetic::{biometric_scores, one_class_task, spam_bag_of_words};

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Overrides the config's seed.
    pub seed: Option<u64>,
    pub out: PathBuf,
    /// Overrides the config's worker count.
    pub jobs: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: None,
            out: PathBuf::from("out"),
            jobs: None,
        }
    }
}

impl RunOptions {
    fn seed(&self, cfg: &ScenarioConfig) -> u64 {
        self.seed.unwrap_or(cfg.evaluation.seed)
    }
}

/// Ingested data: the full dataset, or a fixed training/testing pair.
#[derive(Debug, Clone)]
pub struct LoadedData {
    pub data: Dataset,
    pub test: Option<Dataset>,
    pub vocabulary: Option<Vocabulary>,
}

impl LoadedData {
    pub fn folds(&self, method: ResampleMethod, seed: u64) -> Result<FoldSet> {
        match &self.test {
            Some(test) => Ok(FoldSet::single(self.data.clone(), test.clone())),
            None => resample(&self.data, method, derive_seed(seed, Stream::Resample, 0, 0)),
        }
    }
}

fn normalise_pair(train: &[[f64; 2]], test: &[[f64; 2]]) -> Result<MinMax> {
    let all: Vec<[f64; 2]> = train.iter().chain(test).copied().collect();
    MinMax::fit(&all)
}

fn email_data(cfg: &ScenarioConfig, path: &Path, vocab_size: usize) -> Result<LoadedData> {
    let corpus = tokenize_emails(path)?;
    if corpus.skipped > 0 {
        log::warn!("{} emails skipped (not valid UTF-8)", corpus.skipped);
    }
    let test_corpus = match &cfg.data.test_path {
        Some(p) => Some(tokenize_emails(&cfg.resolve_path(p))?),
        None => None,
    };
    let train_part = match (&test_corpus, cfg.data.resampling) {
        (Some(_), _) => corpus.documents.len(),
        (None, ResampleMethod::Chronological { split_index }) => {
            split_index.min(corpus.documents.len())
        }
        (None, _) => {
            log::warn!(
                "vocabulary selected on the whole corpus: use chronological resampling \
                 or a separate test file to select it on training data only"
            );
            corpus.documents.len()
        }
    };
    let vocab = information_gain_select(
        &corpus.documents[..train_part],
        &corpus.labels[..train_part],
        vocab_size,
    )?;
    let vectorize = |c: &EmailCorpus| vectorize_corpus(c, &vocab);
    Ok(LoadedData {
        data: vectorize(&corpus)?,
        test: test_corpus.as_ref().map(vectorize).transpose()?,
        vocabulary: Some(vocab),
    })
}

fn score_data(cfg: &ScenarioConfig, path: &Path) -> Result<LoadedData> {
    let train = load_scores(path)?;
    let Some(test_path) = &cfg.data.test_path else {
        return Ok(LoadedData {
            data: train.dataset,
            test: None,
            vocabulary: None,
        });
    };
    let test = load_scores(&cfg.resolve_path(test_path))?;
    let raw = |t: &crate::ingestion::ScoreTable| -> Vec<[f64; 2]> {
        t.records.iter().map(|r| r.scores).collect()
    };
    let norm = normalise_pair(&raw(&train), &raw(&test))?;
    let build = |t: &crate::ingestion::ScoreTable| {
        Dataset::from_samples(
            2,
            t.records
                .iter()
                .map(|r| Sample::new(norm.apply(r.scores).to_vec(), r.label))
                .collect(),
        )
    };
    Ok(LoadedData {
        data: build(&train)?,
        test: Some(build(&test)?),
        vocabulary: None,
    })
}

fn file_pair(
    cfg: &ScenarioConfig,
    path: &Path,
    load: fn(&Path) -> Result<Dataset>,
) -> Result<LoadedData> {
    Ok(LoadedData {
        data: load(path)?,
        test: match &cfg.data.test_path {
            Some(p) => Some(load(&cfg.resolve_path(p))?),
            None => None,
        },
        vocabulary: None,
    })
}

/// Runs the ingestion step for the configured source.
pub fn load_data(cfg: &ScenarioConfig, seed: u64) -> Result<LoadedData> {
    let d = &cfg.data;
    let synth_seed = derive_seed(seed, Stream::Synthetic, 0, 0);
    let path = || {
        d.path
            .as_deref()
            .map(|p| cfg.resolve_path(p))
            .ok_or_else(|| Error::Config(format!("data.path is required for {:?}", d.source)))
    };
    let plain = |data| LoadedData {
        data,
        test: None,
        vocabulary: None,
    };
    match d.source {
        DataSource::SyntheticSpam => Ok(plain(spam_bag_of_words(
            d.samples.unwrap_or(2000),
            d.features.unwrap_or(200),
            synth_seed,
        ))),
        DataSource::SyntheticIds => {
            let (train, test) = one_class_task(&d.one_class_task.unwrap_or_default(), synth_seed);
            Ok(LoadedData {
                data: train,
                test: Some(test),
                vocabulary: None,
            })
        }
        DataSource::SyntheticBiometric => {
            let n = d.samples.unwrap_or(2000);
            let genuine = (n as f64 * d.genuine_fraction.unwrap_or(0.25)).round() as usize;
            Ok(plain(biometric_scores(
                &d.score_model.unwrap_or_default(),
                genuine,
                n - genuine,
                synth_seed,
            )?))
        }
        DataSource::Emails => {
            let size = d
                .vocab_size
                .ok_or_else(|| Error::Config("data.vocab_size is required for emails".into()))?;
            email_data(cfg, &path()?, size)
        }
        DataSource::Payloads => file_pair(cfg, &path()?, load_payloads),
        DataSource::Scores => score_data(cfg, &path()?),
        DataSource::Tabular => file_pair(cfg, &path()?, load_tabular),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub samples: usize,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub scenario: String,
    pub seed: u64,
    pub files: Vec<ManifestEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Ingests the configured data and writes canonical dense files under
/// `<out>/data/` plus `manifest.json` with their SHA-256 hashes.
pub fn prepare(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Manifest> {
    let seed = opts.seed(cfg);
    let loaded = load_data(cfg, seed).map_err(|e| e.in_stage("ingestion"))?;
    let mut parts = vec![];
    match &loaded.test {
        Some(test) => {
            parts.push(("data/train.csv", &loaded.data));
            parts.push(("data/test.csv", test));
        }
        None => parts.push(("data/data.csv", &loaded.data)),
    }
    let mut files = Vec::new();
    for (rel, data) in parts {
        let path = opts.out.join(rel);
        write_tabular_at(data, &path).map_err(|e| e.in_stage("write"))?;
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        files.push(ManifestEntry {
            path: rel.to_owned(),
            sha256: sha256_hex(&bytes),
            samples: data.len(),
            dimension: data.dimension(),
        });
    }
    if let Some(vocab) = &loaded.vocabulary {
        let mut text = String::new();
        for t in &vocab.terms {
            text.push_str(t);
            text.push('\n');
        }
        let rel = "data/vocabulary.txt";
        write_file(&opts.out.join(rel), text.as_bytes()).map_err(|e| e.in_stage("write"))?;
        files.push(ManifestEntry {
            path: rel.to_owned(),
            sha256: sha256_hex(text.as_bytes()),
            samples: vocab.len(),
            dimension: 0,
        });
    }
    let manifest = Manifest {
        version: 1,
        scenario: cfg.name.clone(),
        seed,
        files,
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::ModelFormat(e.to_string()))?;
    write_file(&opts.out.join("manifest.json"), json.as_bytes())
        .map_err(|e| e.in_stage("write"))?;
    Ok(manifest)
}

fn write_tabular_at(data: &Dataset, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    write_tabular(data, path, TabularFormat::Dense)
}

#[derive(Debug, Clone)]
pub struct EvaluateSummary {
    pub reports: Vec<EvaluationReport>,
    pub csv_paths: Vec<PathBuf>,
    pub report_paths: Vec<PathBuf>,
    /// `key=value` summary lines.
    pub lines: Vec<String>,
}

/// Index and value of the worst strength: lowest AUC10, highest FAR.
fn worst(metric: Metric, mean: &[f64]) -> Option<(usize, f64)> {
    let better = |a: f64, b: f64| match metric {
        Metric::Auc10 => a < b,
        Metric::FarAtGar { .. } => a > b,
    };
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in mean.iter().enumerate() {
        if best.is_none_or(|(_, b)| better(v, b)) {
            best = Some((i, v));
        }
    }
    best
}

/// Checks the scenario, ingests data, runs one security sweep per
/// classifier and writes `<name>.csv`, `<name>.report.json` and a combined
/// `security_curve.svg` under the output directory.
pub fn evaluate(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<EvaluateSummary> {
    for w in cfg.validate()? {
        log::warn!("{w}");
    }
    let seed = opts.seed(cfg);
    let loaded = load_data(cfg, seed).map_err(|e| e.in_stage("ingestion"))?;
    let folds = loaded
        .folds(cfg.data.resampling, seed)
        .map_err(|e| e.in_stage("resampling"))?;
    let ev = &cfg.evaluation;
    let options = SweepOptions {
        seed,
        construction: ev.construction,
        training_size: ev.training_size,
        testing_size: ev.testing_size,
        repetitions: ev.repetitions,
        jobs: opts.jobs.or(ev.jobs),
        keep_roc: ev.keep_roc,
        ..SweepOptions::default()
    };
    let config_text = cfg.to_toml()?;
    fs::create_dir_all(&opts.out).map_err(|e| Error::io(&opts.out, e))?;

    let mut summary = EvaluateSummary {
        reports: Vec::new(),
        csv_paths: Vec::new(),
        report_paths: Vec::new(),
        lines: vec![
            format!("scenario={}", cfg.name),
            format!("metric={}", ev.metric.name()),
            format!("seed={seed}"),
            format!("folds={}", folds.k()),
        ],
    };
    for c in &cfg.classifiers {
        let start = Instant::now();
        let result = security_sweep(&folds, &cfg.attack, &c.config, cfg.strengths(), ev.metric, &options)
            .map_err(|e| e.in_stage("evaluation"))?;
        let report = EvaluationReport {
            version: REPORT_VERSION,
            scenario: cfg.name.clone(),
            classifier: c.name.clone(),
            classifier_config: c.config.clone(),
            metric: ev.metric,
            seed,
            folds: folds.k(),
            repetitions: ev.repetitions,
            curve: result.curve,
            rocs: result.rocs,
            config: Some(config_text.clone()),
            elapsed_seconds: start.elapsed().as_secs_f64(),
        };
        let curve = &report.curve;
        if let Some((m, _)) = curve.at(0.0) {
            summary.lines.push(format!("{}.clean={m}", c.name));
        }
        if let Some((i, v)) = worst(ev.metric, &curve.mean) {
            summary.lines.push(format!("{}.worst={v}", c.name));
            summary
                .lines
                .push(format!("{}.worst_{}={}", c.name, curve.parameter, curve.strengths[i]));
        }
        if cfg.output.wants(OutputFormat::Csv) {
            let p = opts.out.join(format!("{}.csv", c.name));
            write_file(&p, curve.to_csv().as_bytes())?;
            summary.lines.push(format!("{}.csv={}", c.name, p.display()));
            summary.csv_paths.push(p);
        }
        if cfg.output.wants(OutputFormat::Json) {
            let p = opts.out.join(format!("{}.report.json", c.name));
            write_file(&p, report.to_json()?.as_bytes())?;
            summary.report_paths.push(p);
        }
        summary.reports.push(report);
    }
    if cfg.output.wants(OutputFormat::Svg) {
        let series: Vec<Series> = summary
            .reports
            .iter()
            .map(|r| Series {
                name: r.classifier.clone(),
                points: r.curve.strengths.iter().copied().zip(r.curve.mean.iter().copied()).collect(),
            })
            .collect();
        let first = &summary.reports[0];
        let svg = render_svg(
            &cfg.name,
            &first.curve.parameter,
            &first.metric.name(),
            &series,
            false,
        );
        write_file(&opts.out.join("security_curve.svg"), svg.as_bytes())?;
    }
    Ok(summary)
}

/// One line of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const LOG_FLOOR: f64 = 1e-4;

/// Minimal line chart. With `log_x`, x values are clamped to at least 1e-4
/// and drawn on a decade scale.
pub fn render_svg(title: &str, x_label: &str, y_label: &str, series: &[Series], log_x: bool) -> String {
    let (w, h) = (520.0, 340.0);
    let (left, right, top, bottom) = (60.0, 130.0, 30.0, 45.0);
    let tx = |x: f64| if log_x { x.max(LOG_FLOOR).log10() } else { x };
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|&(x, y)| (tx(x), y)))
        .filter(|p| p.0.is_finite() && p.1.is_finite())
        .collect();
    let span = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = span(&mut all.iter().map(|p| p.0));
    let (y0, y1) = span(&mut all.iter().map(|p| p.1));
    let y0 = y0.min(0.0);
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let py = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="18" text-anchor="middle" font-size="13">{}</text>"#, w / 2.0, xml(title));
    let _ = writeln!(
        out,
        r#"<path d="M{l} {t} V{b} H{r}" stroke="black" fill="none"/>"#,
        l = left,
        t = top,
        b = h - bottom,
        r = w - right
    );
    for i in 0..=4 {
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#,
            left - 4.0,
            py(fy) + 4.0,
            tick(fy)
        );
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let label = if log_x { format!("1e{}", tick(fx)) } else { tick(fx) };
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            px(fx),
            h - bottom + 14.0,
            label
        );
    }
    let scale = if log_x { " (log)" } else { "" };
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{}" text-anchor="middle">{}{scale}</text>"#,
        (left + w - right) / 2.0,
        h - 8.0,
        xml(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
        (top + h - bottom) / 2.0,
        (top + h - bottom) / 2.0,
        xml(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| (tx(x), y))
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
        let ly = top + 14.0 * i as f64 + 6.0;
        let lx = w - right + 10.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 16.0,
            lx + 20.0,
            ly + 4.0,
            xml(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn tick(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Axis metadata for one merged figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureInfo {
    pub data: String,
    pub std: Option<String>,
    pub image: String,
    pub x_label: String,
    pub y_label: String,
    /// `"log"` for ROC figures, whose FAR axis is logarithmic.
    pub x_scale: String,
    pub series: Vec<String>,
}

fn load_report(path: &Path) -> Result<EvaluationReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    EvaluationReport::from_json(&text)
        .map_err(|e| Error::Merge(format!("{}: {e}", path.display())))
}

fn series_names(reports: &[EvaluationReport]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for r in reports {
        let mut name = r.classifier.clone();
        if names.contains(&name) {
            name = format!("{}@{}", r.classifier, r.scenario);
        }
        let base = name.clone();
        let mut i = 2;
        while names.contains(&name) {
            name = format!("{base}#{i}");
            i += 1;
        }
        names.push(name);
    }
    names
}

fn union_grid(reports: &[EvaluationReport]) -> Vec<f64> {
    let mut grid: Vec<f64> = reports
        .iter()
        .flat_map(|r| r.curve.strengths.iter().copied())
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn merged_csv(
    grid: &[f64],
    names: &[String],
    reports: &[EvaluationReport],
    column: impl Fn(&EvaluationReport, usize) -> f64,
) -> String {
    let mut out = String::from("strength");
    for n in names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for &s in grid {
        let _ = write!(out, "{s}");
        for r in reports {
            out.push(',');
            if let Some(i) = r.curve.strengths.iter().position(|&v| v == s) {
                let _ = write!(out, "{}", column(r, i));
            }
        }
        out.push('\n');
    }
    out
}

/// Merges evaluation reports into per-figure CSVs (one column per series,
/// union strength grid, empty cells where a report lacks a strength), SVG
/// renderings, and `figures.json` with axis metadata.
pub fn report(inputs: &[PathBuf], out: &Path) -> Result<Vec<FigureInfo>> {
    if inputs.is_empty() {
        return Err(Error::Merge("no reports given".into()));
    }
    let reports = inputs
        .iter()
        .map(|p| load_report(p))
        .collect::<Result<Vec<_>>>()?;
    let metric = reports[0].metric;
    let parameter = reports[0].curve.parameter.clone();
    let conflicts: Vec<String> = inputs
        .iter()
        .zip(&reports)
        .filter(|(_, r)| r.metric != metric || r.curve.parameter != parameter)
        .map(|(p, r)| format!("{} has {} over {}", p.display(), r.metric.name(), r.curve.parameter))
        .collect();
    if !conflicts.is_empty() {
        return Err(Error::Merge(format!(
            "expected {} over {parameter} (from {}); {}",
            metric.name(),
            inputs[0].display(),
            conflicts.join("; ")
        )));
    }
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let names = series_names(&reports);
    let grid = union_grid(&reports);
    write_file(
        &out.join("security_curve.csv"),
        merged_csv(&grid, &names, &reports, |r, i| r.curve.mean[i]).as_bytes(),
    )?;
    write_file(
        &out.join("security_curve_std.csv"),
        merged_csv(&grid, &names, &reports, |r, i| r.curve.std[i]).as_bytes(),
    )?;
    let series: Vec<Series> = names
        .iter()
        .zip(&reports)
        .map(|(n, r)| Series {
            name: n.clone(),
            points: r.curve.strengths.iter().copied().zip(r.curve.mean.iter().copied()).collect(),
        })
        .collect();
    write_file(
        &out.join("security_curve.svg"),
        render_svg("security curve", &parameter, &metric.name(), &series, false).as_bytes(),
    )?;
    let mut figures = vec![FigureInfo {
        data: "security_curve.csv".into(),
        std: Some("security_curve_std.csv".into()),
        image: "security_curve.svg".into(),
        x_label: parameter.clone(),
        y_label: metric.name(),
        x_scale: "linear".into(),
        series: names.clone(),
    }];

    if reports.iter().any(|r| !r.rocs.is_empty()) {
        let biometric = metric.is_biometric();
        let (x_label, y_label) = if biometric { ("FAR", "GAR") } else { ("FP rate", "TP rate") };
        let mut csv = format!("series,{},x,y\n", parameter);
        let mut roc_series = Vec::new();
        for (name, r) in names.iter().zip(&reports) {
            for entry in &r.rocs {
                let label = format!("{name} {}={}", parameter, entry.strength);
                for &(x, y) in &entry.curve.points {
                    let _ = writeln!(csv, "{name},{},{x},{y}", entry.strength);
                }
                roc_series.push(Series {
                    name: label,
                    points: entry.curve.points.clone(),
                });
            }
        }
        write_file(&out.join("roc.csv"), csv.as_bytes())?;
        write_file(
            &out.join("roc.svg"),
            render_svg("ROC", x_label, y_label, &roc_series, true).as_bytes(),
        )?;
        figures.push(FigureInfo {
            data: "roc.csv".into(),
            std: None,
            image: "roc.svg".into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_scale: "log".into(),
            series: roc_series.into_iter().map(|s| s.name).collect(),
        });
    }
    let json = serde_json::to_string_pretty(&figures).map_err(|e| Error::ModelFormat(e.to_string()))?;
    write_file(&out.join("figures.json"), json.as_bytes())?;
    Ok(figures)
}

/// Config-only check: parses, validates, and reports warnings. No data is
/// read and nothing is trained.
pub fn validate(cfg: &ScenarioConfig) -> Result<Vec<String>> {
    let mut warnings = cfg.validate()?;
    if let Some(p) = &cfg.data.path {
        let p = cfg.resolve_path(p);
        if !p.exists() {
            warnings.push(format!("data.path {} does not exist", p.display()));
        }
    }
    Ok(warnings)
}
