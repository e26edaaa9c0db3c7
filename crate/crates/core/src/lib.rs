//! Security evaluation of pattern classifiers under simulated attack.
//!
//! The crate builds training and testing sets from a generative data model
//! that includes attack samples, trains classifiers on them and measures
//! how performance degrades as attack strength grows.

pub mod attacks;
pub mod classifiers;
pub mod config;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod ingestion;
pub mod pipeline;
pub mod rng;
pub mod synthetic;

pub use error::{Error, Result};
