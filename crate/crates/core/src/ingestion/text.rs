use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label, Sample};
use crate::error::{Error, Result};

pub type TokenSet = BTreeSet<String>;

const MIN_TOKEN: usize = 2;
const MAX_TOKEN: usize = 40;

/// Lowercases, splits on non-alphanumeric characters and keeps tokens of
/// 2 to 40 characters. Presence only.
pub fn tokenize(text: &str) -> TokenSet {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| (MIN_TOKEN..=MAX_TOKEN).contains(&t.chars().count()))
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmailCorpus {
    pub documents: Vec<TokenSet>,
    pub labels: Vec<Label>,
    pub paths: Vec<PathBuf>,
    /// Documents dropped because they were not valid UTF-8.
    pub skipped: usize,
}

fn parse_label(s: &str) -> Option<Label> {
    match s.to_ascii_lowercase().as_str() {
        "ham" | "l" | "legitimate" => Some(Label::Legitimate),
        "spam" | "m" | "malicious" => Some(Label::Malicious),
        _ => None,
    }
}

/// Reads an index of `ham|spam <path>` lines (paths relative to the index
/// file) and tokenizes every listed document, in index order.
pub fn tokenize_emails(index: &Path) -> Result<EmailCorpus> {
    let text = fs::read_to_string(index).map_err(|e| Error::io(index, e))?;
    let base = index.parent().unwrap_or(Path::new("."));
    let mut entries = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |message: String| Error::Parse {
            path: index.display().to_string(),
            line: no + 1,
            message,
        };
        let (label, path) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| parse("expected `<label> <path>`".into()))?;
        let label =
            parse_label(label).ok_or_else(|| parse(format!("unknown label `{label}`")))?;
        entries.push((label, base.join(path.trim())));
    }
    let docs: Vec<Option<TokenSet>> = entries
        .par_iter()
        .map(|(_, path)| {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            Ok(match String::from_utf8(bytes) {
                Ok(s) => Some(tokenize(&s)),
                Err(_) => {
                    log::warn!("skipping {}: not valid UTF-8", path.display());
                    None
                }
            })
        })
        .collect::<Result<_>>()?;
    let mut corpus = EmailCorpus {
        documents: Vec::new(),
        labels: Vec::new(),
        paths: Vec::new(),
        skipped: 0,
    };
    for ((label, path), doc) in entries.into_iter().zip(docs) {
        match doc {
            Some(d) => {
                corpus.documents.push(d);
                corpus.labels.push(label);
                corpus.paths.push(path);
            }
            None => corpus.skipped += 1,
        }
    }
    if corpus.skipped > 0 {
        log::warn!("{} undecodable documents skipped", corpus.skipped);
    }
    Ok(corpus)
}

/// Selected terms in descending information gain (bits), ties broken by
/// term order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub terms: Vec<String>,
    pub gains: Vec<f64>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn entropy(a: f64, b: f64) -> f64 {
    let n = a + b;
    if n == 0.0 {
        return 0.0;
    }
    [a, b]
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / n;
            -p * p.log2()
        })
        .sum()
}

/// IG(t) = H(Y) - H(Y | presence of t), from document counts.
pub fn information_gain_select(
    documents: &[TokenSet],
    labels: &[Label],
    vocab_size: usize,
) -> Result<Vocabulary> {
    if documents.len() != labels.len() {
        return Err(Error::InvalidParameter(format!(
            "{} documents but {} labels",
            documents.len(),
            labels.len()
        )));
    }
    let n_spam = labels.iter().filter(|&&l| l == Label::Malicious).count() as f64;
    let n_ham = labels.len() as f64 - n_spam;
    if n_spam == 0.0 || n_ham == 0.0 {
        return Err(Error::SingleClass(
            "information gain needs both classes".into(),
        ));
    }
    let mut counts: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    for (doc, &label) in documents.iter().zip(labels) {
        for term in doc {
            let c = counts.entry(term.as_str()).or_default();
            match label {
                Label::Legitimate => c.0 += 1.0,
                Label::Malicious => c.1 += 1.0,
            }
        }
    }
    let n = n_spam + n_ham;
    let h = entropy(n_ham, n_spam);
    let mut scored: Vec<(f64, &str)> = counts
        .iter()
        .map(|(&term, &(ham_with, spam_with))| {
            let with = ham_with + spam_with;
            let without = n - with;
            let cond = with / n * entropy(ham_with, spam_with)
                + without / n * entropy(n_ham - ham_with, n_spam - spam_with);
            ((h - cond).max(0.0), term)
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
    if vocab_size > scored.len() {
        log::warn!(
            "vocabulary size {vocab_size} exceeds the {} distinct terms; keeping all",
            scored.len()
        );
    }
    scored.truncate(vocab_size);
    Ok(Vocabulary {
        terms: scored.iter().map(|(_, t)| t.to_string()).collect(),
        gains: scored.iter().map(|(g, _)| *g).collect(),
    })
}

/// Binary presence vector over `vocab`.
pub fn vectorize(tokens: &TokenSet, vocab: &Vocabulary) -> Vec<f64> {
    vocab
        .terms
        .iter()
        .map(|t| if tokens.contains(t) { 1.0 } else { 0.0 })
        .collect()
}

pub fn vectorize_corpus(corpus: &EmailCorpus, vocab: &Vocabulary) -> Result<Dataset> {
    Dataset::from_samples(
        vocab.len(),
        corpus
            .documents
            .iter()
            .zip(&corpus.labels)
            .map(|(doc, &label)| Sample::new(vectorize(doc, vocab), label))
            .collect(),
    )
}
