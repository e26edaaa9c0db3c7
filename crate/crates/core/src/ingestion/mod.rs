//! Loaders that turn raw corpora into datasets: tokenized emails with
//! information-gain feature selection, payload byte histograms, biometric
//! score tables and plain tabular files.

mod payload;
mod scores;
mod tabular;
mod text;

pub use payload::{load_payloads, payload_histogram};
pub use scores::{load_scores, MinMax, ScoreRecord, ScoreTable};
pub use tabular::{format_tabular, load_tabular, write_tabular, TabularFormat};
pub use text::{
    information_gain_select, tokenize, tokenize_emails, vectorize, vectorize_corpus, EmailCorpus,
    TokenSet, Vocabulary,
};
