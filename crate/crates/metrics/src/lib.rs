//! Metric implementations: corpus BLEU, multilingual ROUGE-1, accuracy,
//! cosine similarity, off-target ratio, language democratization, and
//! token statistics. All operations are pure and reentrant.

mod bleu;
mod otr;
mod rouge;
mod scores;
mod simple;

pub use bleu::{bleu, tokenize_13a, BleuConfig, BleuReport, Smoothing};
pub use otr::{off_target_ratio, LanguageIdentifier, ScriptedIdentifier};
pub use rouge::{rouge1, tokenize_multilingual, RougeReport};
pub use scores::{EvalMode, ScoreKey, ScoreMatrix};
pub use simple::{accuracy, cosine_similarity, democratization, token_stats, FieldTexts, TokenStats};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("hypothesis/reference length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty reference string at index {0}")]
    EmptyReference(usize),
    #[error("vector dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero vector")]
    ZeroVector,
    #[error("no scores provided")]
    EmptyScores,
    #[error("all scores are zero")]
    AllZeroScores,
    #[error("identifier has no profile for language '{0}'")]
    UnsupportedLanguage(String),
    #[error("duplicate score entry for {0}")]
    DuplicateEntry(String),
    #[error("malformed score row: {0}")]
    MalformedRow(String),
}
